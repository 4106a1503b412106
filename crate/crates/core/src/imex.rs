//! Shared IMEX stepping kernel on the reference interval y in [0, 1].
//!
//! One step treats diffusion and the mesh/drift advection `+ c(y) w_y`
//! implicitly (centered differences, per-row upwind fallback past the mesh
//! Peclet limit so the matrix stays an M-matrix), and the conservative
//! chemotactic flux plus the logistic reaction explicitly. Under the
//! advective CFL and reaction step bounds the explicit stage maps
//! nonnegative states to nonnegative states, and the implicit solve cannot
//! create sign changes; undershoots beyond roundoff are therefore scheme
//! failures and abort the run.

use crate::error::SolverError;
use crate::numerics::solve_tridiagonal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BcSide {
    Neumann,
    Dirichlet,
}

pub(crate) struct StepSpec<'a> {
    pub t: f64,
    pub dt: f64,
    pub dy: f64,
    /// Metric factor 1/L² of the straightening map.
    pub inv_len2: f64,
    /// Advection coefficient of the `+ c w_y` term at each node (moving-mesh
    /// drift, or physical drift mapped to the reference interval).
    pub advection: &'a [f64],
    /// Drift potential phi = chi1 z1 - chi2 z2; the conservative flux moves
    /// cells with face velocity `inv_len2 * dphi/dy`. Empty = no drift.
    pub drift_potential: &'a [f64],
    /// Logistic growth a(t, x_i) per node.
    pub growth: &'a [f64],
    /// Logistic damping b(t, x_i) per node.
    pub damping: &'a [f64],
    pub left: BcSide,
    pub right: BcSide,
}

/// Largest chemotactic face speed, for CFL control.
pub(crate) fn max_drift_speed(phi: &[f64], dy: f64, inv_len2: f64) -> f64 {
    phi.windows(2)
        .map(|w| (inv_len2 * (w[1] - w[0]) / dy).abs())
        .fold(0.0, f64::max)
}

/// Undershoots at or above this threshold are treated as roundoff and
/// clamped to zero; anything larger aborts the step.
const NEGATIVITY_CLAMP: f64 = -1e-12;

pub(crate) fn imex_step(w: &[f64], spec: &StepSpec) -> Result<Vec<f64>, SolverError> {
    let n = w.len() - 1;
    let dy = spec.dy;
    let dt = spec.dt;
    let inv2y = spec.inv_len2 / (dy * dy);

    let lo = if spec.left == BcSide::Dirichlet { 1 } else { 0 };
    let hi = if spec.right == BcSide::Dirichlet { n - 1 } else { n };
    let m = hi - lo + 1;

    // Explicit stage: chemotactic flux divergence + logistic reaction.
    let mut star = vec![0.0f64; m];
    let has_drift = !spec.drift_potential.is_empty();
    for (k, si) in star.iter_mut().enumerate() {
        let i = lo + k;
        let mut rate = w[i] * (spec.growth[i] - spec.damping[i] * w[i]);
        if has_drift {
            let phi = spec.drift_potential;
            // Face velocity is zero at zero-flux ends; beyond a grid end the
            // flux vanishes either way.
            let f_right = if i == n {
                0.0
            } else {
                let vel = spec.inv_len2 * (phi[i + 1] - phi[i]) / dy;
                if vel >= 0.0 {
                    vel * w[i]
                } else {
                    vel * w[i + 1]
                }
            };
            let f_left = if i == 0 {
                0.0
            } else {
                let vel = spec.inv_len2 * (phi[i] - phi[i - 1]) / dy;
                if vel >= 0.0 {
                    vel * w[i - 1]
                } else {
                    vel * w[i]
                }
            };
            rate -= (f_right - f_left) / dy;
        }
        *si = w[i] + dt * rate;
    }

    // Implicit stage: I - dt (inv_len2 D2 + C), tridiagonal.
    let mut lower = vec![0.0f64; m];
    let mut diag = vec![0.0f64; m];
    let mut upper = vec![0.0f64; m];
    let peclet_limit = 2.0 * spec.inv_len2 / dy;
    for k in 0..m {
        let i = lo + k;
        // Diffusion row, with ghost reflection at zero-flux ends.
        let (mut op_lo, mut op_di, mut op_up) = if i == 0 {
            (0.0, -2.0 * inv2y, 2.0 * inv2y)
        } else if i == n {
            (2.0 * inv2y, -2.0 * inv2y, 0.0)
        } else {
            (inv2y, -2.0 * inv2y, inv2y)
        };
        // Advection row. The derivative vanishes at zero-flux ends, so the
        // term is only assembled for interior unknowns.
        if i != 0 && i != n {
            let c = spec.advection[i];
            if c.abs() <= peclet_limit {
                op_lo -= c / (2.0 * dy);
                op_up += c / (2.0 * dy);
            } else if c > 0.0 {
                op_di -= c / dy;
                op_up += c / dy;
            } else {
                op_di += c / dy;
                op_lo -= c / dy;
            }
        }
        lower[k] = if k == 0 { 0.0 } else { -dt * op_lo };
        diag[k] = 1.0 - dt * op_di;
        upper[k] = if k == m - 1 { 0.0 } else { -dt * op_up };
    }
    solve_tridiagonal(&lower, &diag, &upper, &mut star);

    // Reassemble the full grid with pinned boundary values.
    let mut out = vec![0.0f64; n + 1];
    out[lo..=hi].copy_from_slice(&star);
    if spec.left == BcSide::Dirichlet {
        out[0] = 0.0;
    }
    if spec.right == BcSide::Dirichlet {
        out[n] = 0.0;
    }

    let mut min = f64::INFINITY;
    let mut min_node = 0;
    for (i, v) in out.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(SolverError::NonFinite {
                t: spec.t,
                context: "imex step",
            });
        }
        if *v < min {
            min = *v;
            min_node = i;
        }
        if *v < 0.0 {
            *v = if *v >= NEGATIVITY_CLAMP { 0.0 } else { *v };
        }
    }
    if min < NEGATIVITY_CLAMP {
        return Err(SolverError::Negativity {
            t: spec.t,
            min,
            node: min_node,
        });
    }
    Ok(out)
}
