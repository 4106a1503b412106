//! Principal eigenvalues and growth-exponent intervals of the linearized
//! operator `d²/dx² + a(t,x)`, and the critical domain lengths where the
//! principal exponent crosses zero.
//!
//! Two boundary setups appear: zero flux at the left end with an absorbing
//! right end (the single-front linearization), and absorbing ends on both
//! sides (the double-front linearization). For constant or time-periodic
//! coefficients the exponent interval degenerates to a point; the evolution
//! estimator keeps min/max over trailing windows so non-convergence is
//! visible rather than averaged away.

use crate::coeff::{CoefficientField, CoefficientKind};
use crate::error::SpectrumError;
use crate::numerics::solve_tridiagonal;
use serde::{Deserialize, Serialize};

/// Boundary configuration of the linearized problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryKind {
    /// Zero flux at x = 0, absorbing at x = length.
    MixedNeumannDirichlet { length: f64 },
    /// Absorbing at both ends of [left, right].
    DirichletDirichlet { left: f64, right: f64 },
}

impl BoundaryKind {
    pub fn validate(&self) -> Result<(), SpectrumError> {
        match *self {
            BoundaryKind::MixedNeumannDirichlet { length } => {
                if !(length > 0.0 && length.is_finite()) {
                    return Err(SpectrumError::InvalidBoundary(format!(
                        "interval length must be positive, got {length}"
                    )));
                }
            }
            BoundaryKind::DirichletDirichlet { left, right } => {
                if !(left < right && left.is_finite() && right.is_finite()) {
                    return Err(SpectrumError::InvalidBoundary(format!(
                        "need left < right, got [{left}, {right}]"
                    )));
                }
            }
        }
        Ok(())
    }

    fn span(&self) -> (f64, f64) {
        match *self {
            BoundaryKind::MixedNeumannDirichlet { length } => (0.0, length),
            BoundaryKind::DirichletDirichlet { left, right } => (left, right),
        }
    }
}

/// Estimated interval of asymptotic growth exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumInterval {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub horizon_used: f64,
    pub window_count: usize,
}

/// Symmetric tridiagonal representation of `d²/dx² + diag(a)` under the given
/// boundary conditions. The zero-flux row couples with weight `2/dx²` via a
/// ghost reflection; a diagonal similarity restores symmetry without changing
/// the spectrum.
struct DiscreteOperator {
    diag: Vec<f64>,
    off: Vec<f64>,
}

fn assemble<F: Fn(f64) -> f64>(a: &F, bc: &BoundaryKind, n: usize) -> DiscreteOperator {
    let (x0, x1) = bc.span();
    let dx = (x1 - x0) / n as f64;
    let inv2 = 1.0 / (dx * dx);
    match bc {
        BoundaryKind::MixedNeumannDirichlet { .. } => {
            // Unknowns at nodes 0..n-1; node n is absorbing.
            let m = n;
            let mut diag = vec![0.0; m];
            let mut off = vec![0.0; m - 1];
            for (i, d) in diag.iter_mut().enumerate() {
                *d = a(x0 + i as f64 * dx) - 2.0 * inv2;
            }
            for (i, e) in off.iter_mut().enumerate() {
                *e = if i == 0 { std::f64::consts::SQRT_2 * inv2 } else { inv2 };
            }
            DiscreteOperator { diag, off }
        }
        BoundaryKind::DirichletDirichlet { .. } => {
            // Unknowns at interior nodes 1..n-1.
            let m = n - 1;
            let mut diag = vec![0.0; m];
            for (i, d) in diag.iter_mut().enumerate() {
                *d = a(x0 + (i + 1) as f64 * dx) - 2.0 * inv2;
            }
            DiscreteOperator {
                diag,
                off: vec![inv2; m - 1],
            }
        }
    }
}

impl DiscreteOperator {
    /// Number of eigenvalues strictly below `sigma` (Sturm pivot count).
    fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0usize;
        let mut pivot = self.diag[0] - sigma;
        if pivot < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e2 = self.off[i - 1] * self.off[i - 1];
            let mut denom = pivot;
            if denom == 0.0 {
                denom = 1e-300;
            }
            pivot = (self.diag[i] - sigma) - e2 / denom;
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let m = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i < m - 1 {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn mul(&self, v: &[f64], out: &mut [f64]) {
        let m = v.len();
        for i in 0..m {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i < m - 1 {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }

    /// Largest eigenvalue: Sturm bisection to isolate it, then inverse
    /// iteration with a Rayleigh-quotient polish.
    fn largest_eigenvalue(&self, rel_tol: f64) -> Result<f64, SpectrumError> {
        let m = self.diag.len();
        let (glo, ghi) = self.gershgorin();
        let mut lo = glo;
        let mut hi = ghi + 1e-12 * (1.0 + ghi.abs());
        // Invariant: count_below(hi) == m, count_below(lo) < m.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) == m {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= rel_tol * hi.abs().max(1.0) {
                break;
            }
        }
        let mut lambda = 0.5 * (lo + hi);

        // Inverse iteration at a shift just above the eigenvalue; the matrix
        // stays negative definite so the Thomas solve is safe.
        let shift = hi + (hi - lo).max(1e-9 * hi.abs().max(1.0));
        let mut v = vec![1.0 / (m as f64).sqrt(); m];
        let mut work = vec![0.0; m];
        let lower: Vec<f64> = std::iter::once(0.0).chain(self.off.iter().copied()).collect();
        let diag_shift: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        let upper: Vec<f64> = self.off.iter().copied().chain(std::iter::once(0.0)).collect();
        for _ in 0..8 {
            work.copy_from_slice(&v);
            solve_tridiagonal(&lower, &diag_shift, &upper, &mut work);
            let norm = work.iter().map(|w| w * w).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            for (vi, wi) in v.iter_mut().zip(&work) {
                *vi = wi / norm;
            }
        }
        self.mul(&v, &mut work);
        let rayleigh: f64 = v.iter().zip(&work).map(|(a, b)| a * b).sum();
        let residual: f64 = v
            .iter()
            .zip(&work)
            .map(|(vi, wi)| (wi - rayleigh * vi) * (wi - rayleigh * vi))
            .sum::<f64>()
            .sqrt();
        let scale = self.diag.iter().fold(0.0f64, |s, d| s.max(d.abs()))
            + 2.0 * self.off.iter().fold(0.0f64, |s, e| s.max(e.abs()));
        if residual <= 1e-8 * scale && (rayleigh - lambda).abs() <= 10.0 * (hi - lo) + 1e-9 * scale
        {
            lambda = rayleigh;
        }
        if !lambda.is_finite() {
            return Err(SpectrumError::NoConvergence {
                iterations: 200,
                residual,
            });
        }
        Ok(lambda)
    }
}

/// Principal eigenvalue of `d²/dx² + a(x)` under `bc` on an `n`-interval grid.
///
/// Second-order centered differences; the discrete eigenvalue converges to
/// the continuum one at O(dx²).
pub fn principal_eigenvalue<F: Fn(f64) -> f64>(
    a: &F,
    bc: &BoundaryKind,
    n: usize,
) -> Result<f64, SpectrumError> {
    bc.validate()?;
    if n < 8 {
        return Err(SpectrumError::InvalidBoundary(format!(
            "grid must have at least 8 intervals, got {n}"
        )));
    }
    assemble(a, bc, n).largest_eigenvalue(1e-12)
}

/// Richardson-extrapolated principal eigenvalue over grids n and 2n,
/// cancelling the O(dx²) term of the centered discretization.
pub fn principal_eigenvalue_extrapolated<F: Fn(f64) -> f64>(
    a: &F,
    bc: &BoundaryKind,
    n: usize,
) -> Result<f64, SpectrumError> {
    let coarse = principal_eigenvalue(a, bc, n)?;
    let fine = principal_eigenvalue(a, bc, 2 * n)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Options for the evolution-based exponent estimator.
#[derive(Debug, Clone, Copy)]
pub struct ExponentOptions {
    pub grid_n: usize,
    pub horizon: f64,
    pub windows: usize,
    pub dt: f64,
}

impl ExponentOptions {
    pub fn for_field(c: &CoefficientField) -> Self {
        let horizon = match c.kind {
            CoefficientKind::Constant => 200.0,
            _ => (20.0 * c.period).max(200.0),
        };
        ExponentOptions {
            grid_n: 256,
            horizon,
            windows: 8,
            dt: match c.kind {
                CoefficientKind::Constant => 0.01,
                _ => (c.period / 128.0).min(0.01),
            },
        }
    }
}

/// Growth-exponent interval of `v_t = v_xx + a(t,x) v` under `bc`, estimated
/// by evolving from the all-ones state with per-step renormalization.
///
/// Per-window exponents `ln(growth)/dt` are recorded over equal windows after
/// a burn-in of the first 20% of the horizon; for periodic coefficients both
/// the burn-in and window lengths are rounded to whole periods so the window
/// exponents are phase-aligned. Returns (min, max) over the windows.
pub fn exponent_interval(
    c: &CoefficientField,
    bc: &BoundaryKind,
    opts: &ExponentOptions,
) -> Result<SpectrumInterval, SpectrumError> {
    bc.validate()?;
    let n = opts.grid_n.max(8);
    let windows = opts.windows.max(4);
    let (x0, x1) = bc.span();
    let dx = (x1 - x0) / n as f64;
    let inv2 = 1.0 / (dx * dx);

    // Window plan. Periodic coefficients get period-aligned windows.
    let (burn_in, window_len) = match c.kind {
        CoefficientKind::Constant => {
            let h = opts.horizon.max(100.0);
            (0.2 * h, 0.8 * h / windows as f64)
        }
        _ => {
            let t = c.period;
            let h = opts.horizon.max(10.0 * t);
            let burn = (0.2 * h / t).ceil() * t;
            let win = ((0.8 * h / windows as f64) / t).ceil().max(1.0) * t;
            (burn, win)
        }
    };
    let horizon = burn_in + windows as f64 * window_len;
    let steps_per_window = (window_len / opts.dt).ceil() as usize;
    let dt = window_len / steps_per_window as f64;
    let burn_steps = (burn_in / dt).round() as usize;

    // Unknown layout as in `assemble`; the Crank-Nicolson step uses the raw
    // (unsymmetrized) rows since the Thomas solve does not need symmetry.
    let (m, ghost_first, offset) = match bc {
        BoundaryKind::MixedNeumannDirichlet { .. } => (n, true, 0usize),
        BoundaryKind::DirichletDirichlet { .. } => (n - 1, false, 1usize),
    };
    let xs: Vec<f64> = (0..m).map(|i| x0 + (i + offset) as f64 * dx).collect();

    let mut v = vec![1.0f64; m];
    let mut rhs = vec![0.0f64; m];
    let mut lower = vec![0.0f64; m];
    let mut diag = vec![0.0f64; m];
    let mut upper = vec![0.0f64; m];

    let mut log_norm = 0.0f64;
    let mut t = 0.0f64;
    let mut exponents: Vec<f64> = Vec::with_capacity(windows);
    let mut window_start_log = 0.0f64;

    let total_steps = burn_steps + windows * steps_per_window;
    for step in 0..total_steps {
        let tm = t + 0.5 * dt;
        // rhs = (I + dt/2 L) v, matrix = I - dt/2 L, L = D2 + diag(a(tm, x)).
        for i in 0..m {
            let ai = c.a(tm, xs[i]);
            let (lo, up) = if i == 0 && ghost_first {
                (0.0, 2.0 * inv2)
            } else {
                (inv2, inv2)
            };
            let dcenter = ai - 2.0 * inv2;
            let vm = if i > 0 { v[i - 1] } else { 0.0 };
            let vp = if i < m - 1 { v[i + 1] } else { 0.0 };
            rhs[i] = v[i] + 0.5 * dt * (lo * vm + dcenter * v[i] + up * vp);
            lower[i] = if i > 0 { -0.5 * dt * lo } else { 0.0 };
            diag[i] = 1.0 - 0.5 * dt * dcenter;
            upper[i] = if i < m - 1 { -0.5 * dt * up } else { 0.0 };
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        let norm = rhs.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        if !(norm.is_finite() && norm > 0.0) {
            return Err(SpectrumError::Overflow { t });
        }
        for (vi, ri) in v.iter_mut().zip(&rhs) {
            *vi = ri / norm;
        }
        log_norm += norm.ln();
        t += dt;

        if step + 1 == burn_steps {
            window_start_log = log_norm;
        } else if step + 1 > burn_steps && (step + 1 - burn_steps).is_multiple_of(steps_per_window) {
            exponents.push((log_norm - window_start_log) / window_len);
            window_start_log = log_norm;
        }
    }

    let lambda_min = exponents.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda_max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SpectrumInterval {
        lambda_min,
        lambda_max,
        horizon_used: horizon,
        window_count: exponents.len(),
    })
}

/// Grid used for the eigenvalue evaluations inside critical-length searches.
const CRITICAL_GRID_N: usize = 512;

/// Exponent lower endpoint for the given field, dispatched by class:
/// constant and time-periodic fields reduce exactly to a constant-coefficient
/// eigenvalue (via the time mean), space-dependent fields fall back to the
/// evolution estimator.
fn lambda_min_for(c: &CoefficientField, bc: &BoundaryKind) -> Result<f64, SpectrumError> {
    let reducible = match c.kind {
        CoefficientKind::Constant | CoefficientKind::TimeOnly => true,
        CoefficientKind::SpaceTime => {
            c.a.is_space_independent() || {
                // Time-independent space profiles keep the eigensolver path.
                c.a.is_time_independent()
            }
        }
    };
    if reducible {
        if c.a.is_time_independent() && !c.a.is_space_independent() {
            let profile = |x: f64| c.a(0.0, x);
            return principal_eigenvalue(&profile, bc, CRITICAL_GRID_N);
        }
        let abar = c.a_time_mean(bc.span().0);
        return principal_eigenvalue(&|_| abar, bc, CRITICAL_GRID_N);
    }
    let opts = ExponentOptions::for_field(c);
    Ok(exponent_interval(c, bc, &opts)?.lambda_min)
}

/// Critical length for the single-front (zero-flux left, absorbing right)
/// linearization: the unique length where the principal exponent crosses
/// zero. Bisection on a bracket expanded geometrically on failure.
pub fn critical_length_single(c: &CoefficientField, tol: f64) -> Result<f64, SpectrumError> {
    let eval = |l: f64| -> Result<f64, SpectrumError> {
        lambda_min_for(c, &BoundaryKind::MixedNeumannDirichlet { length: l })
    };
    bisect_critical(&eval, c, tol, "critical length (single front)")
}

/// Critical width for the double-front (absorbing both ends) linearization.
///
/// The exponent is positive for every placement of an interval wider than the
/// critical width, and zero for some placement at it; the bisection target is
/// therefore the worst (infimum) exponent over placements. Spatially
/// homogeneous fields are placement-invariant and skip the search.
pub fn critical_length_double(c: &CoefficientField, tol: f64) -> Result<f64, SpectrumError> {
    let spatial = !c.a.is_space_independent();
    let eval = |width: f64| -> Result<f64, SpectrumError> {
        if !spatial {
            return lambda_min_for(
                c,
                &BoundaryKind::DirichletDirichlet {
                    left: 0.0,
                    right: width,
                },
            );
        }
        // Worst placement over a uniform grid of left endpoints in the
        // declared window.
        let (w0, w1) = c.x_window;
        let placements = 64usize;
        let mut worst = f64::INFINITY;
        for i in 0..placements {
            let span = (w1 - w0 - width).max(0.0);
            let left = w0 + span * i as f64 / (placements - 1).max(1) as f64;
            let lam = lambda_min_for(
                c,
                &BoundaryKind::DirichletDirichlet {
                    left,
                    right: left + width,
                },
            )?;
            worst = worst.min(lam);
        }
        Ok(worst)
    };
    bisect_critical(&eval, c, tol, "critical width (double front)")
}

fn bisect_critical<F: Fn(f64) -> Result<f64, SpectrumError>>(
    eval: &F,
    c: &CoefficientField,
    tol: f64,
    what: &'static str,
) -> Result<f64, SpectrumError> {
    if !(c.a_inf > 0.0) {
        // The large-domain bracket endpoint needs a positive growth infimum.
        return Err(SpectrumError::Model(crate::error::ModelError::InvalidParam {
            name: "a_inf",
            value: c.a_inf,
            reason: "critical-length search requires a positive growth infimum",
        }));
    }
    let tol = if tol > 0.0 { tol } else { 1e-6 };
    let mut lo = 1e-2;
    let mut hi = 1e3 * 1.0f64.max(1.0 / c.a_inf.sqrt());
    let mut flo = eval(lo)?;
    let mut fhi = eval(hi)?;
    let mut expansions = 0;
    while !(flo < 0.0 && fhi > 0.0) {
        expansions += 1;
        if expansions > 8 {
            return Err(SpectrumError::BracketFailure { what, lo, hi });
        }
        if flo >= 0.0 {
            lo *= 0.25;
            flo = eval(lo)?;
        }
        if fhi <= 0.0 {
            hi *= 4.0;
            fhi = eval(hi)?;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Sampler;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    // Closed forms from substituting the principal eigenfunctions into the
    // constant-coefficient problem: cos(pi x / (2 l)) for the mixed case
    // gives a - pi^2/(4 l^2); sin(pi (x - left) / L) for the absorbing case
    // gives a - pi^2/L^2.
    fn mixed_exact(a: f64, l: f64) -> f64 {
        a - PI * PI / (4.0 * l * l)
    }

    fn dirichlet_exact(a: f64, span: f64) -> f64 {
        a - PI * PI / (span * span)
    }

    #[test]
    fn eigenvalue_matches_closed_form_mixed() {
        let bc = BoundaryKind::MixedNeumannDirichlet { length: 10.0 };
        let lam = principal_eigenvalue_extrapolated(&|_| 1.0, &bc, 256).unwrap();
        assert_relative_eq!(lam, mixed_exact(1.0, 10.0), epsilon = 1e-8);

        let bc = BoundaryKind::MixedNeumannDirichlet { length: PI / 2.0 };
        let lam = principal_eigenvalue_extrapolated(&|_| 0.0, &bc, 256).unwrap();
        assert_relative_eq!(lam, -1.0, epsilon = 1e-8);
    }

    #[test]
    fn eigenvalue_matches_closed_form_dirichlet() {
        let bc = BoundaryKind::DirichletDirichlet {
            left: 0.0,
            right: PI,
        };
        let lam = principal_eigenvalue_extrapolated(&|_| 1.0, &bc, 256).unwrap();
        assert_relative_eq!(lam, 0.0, epsilon = 1e-8);
        assert_relative_eq!(lam, dirichlet_exact(1.0, PI), epsilon = 1e-8);
    }

    #[test]
    fn eigenvalue_grid_convergence_is_second_order() {
        let bc = BoundaryKind::MixedNeumannDirichlet { length: 2.0 };
        let exact = mixed_exact(1.0, 2.0);
        let e1 = (principal_eigenvalue(&|_| 1.0, &bc, 64).unwrap() - exact).abs();
        let e2 = (principal_eigenvalue(&|_| 1.0, &bc, 128).unwrap() - exact).abs();
        let rate = (e1 / e2).log2();
        assert!(rate > 1.9 && rate < 2.1, "observed rate {rate}");
    }

    #[test]
    fn eigenvalue_monotone_in_coefficient_and_domain() {
        let bc = BoundaryKind::MixedNeumannDirichlet { length: 3.0 };
        let l1 = principal_eigenvalue(&|_| 1.0, &bc, 128).unwrap();
        let l2 = principal_eigenvalue(&|_| 2.0, &bc, 128).unwrap();
        assert!(l1 < l2);
        let shorter = BoundaryKind::MixedNeumannDirichlet { length: 1.5 };
        let l3 = principal_eigenvalue(&|_| 1.0, &shorter, 128).unwrap();
        assert!(l3 < l1);
    }

    #[test]
    fn eigenvalue_limits_small_and_large_domains() {
        let tiny = BoundaryKind::MixedNeumannDirichlet { length: 0.01 };
        let lam = principal_eigenvalue(&|_| 10.0, &tiny, 256).unwrap();
        assert!(lam < -0.9e4, "lambda at tiny length: {lam}");
        let huge = BoundaryKind::MixedNeumannDirichlet { length: 1e3 };
        let lam = principal_eigenvalue(&|_| 1.0, &huge, 256).unwrap();
        assert!(lam >= 1.0 - 1e-3, "lambda at huge length: {lam}");
    }

    #[test]
    fn exponent_interval_collapses_for_constant_field() {
        let c = CoefficientField::constant(1.0, 1.0);
        let bc = BoundaryKind::MixedNeumannDirichlet { length: 10.0 };
        let opts = ExponentOptions {
            grid_n: 256,
            horizon: 200.0,
            windows: 8,
            dt: 0.01,
        };
        let iv = exponent_interval(&c, &bc, &opts).unwrap();
        let eig = principal_eigenvalue(&|_| 1.0, &bc, 256).unwrap();
        assert!(iv.lambda_max - iv.lambda_min <= 2e-5);
        assert!((iv.lambda_min - eig).abs() <= 1e-4, "{} vs {eig}", iv.lambda_min);
    }

    #[test]
    fn exponent_interval_periodic_matches_time_mean() {
        // Space-independent periodic growth separates: the exponent is the
        // time mean of a plus the principal eigenvalue at a = 0.
        let c = CoefficientField::time_periodic(
            Sampler::SinPeriodic {
                offset: 1.0,
                amplitude: 0.5,
                period: 1.0,
            },
            Sampler::Constant { value: 1.0 },
            1.0,
            [0.5, 1.5, 1.0, 1.0],
        );
        let bc = BoundaryKind::MixedNeumannDirichlet { length: 10.0 };
        let opts = ExponentOptions {
            grid_n: 256,
            horizon: 200.0,
            windows: 8,
            dt: 1.0 / 128.0,
        };
        let iv = exponent_interval(&c, &bc, &opts).unwrap();
        let expected = 1.0 + principal_eigenvalue(&|_| 0.0, &bc, 256).unwrap();
        assert!(iv.lambda_max - iv.lambda_min <= 2e-5);
        assert!((iv.lambda_min - expected).abs() <= 1e-4);
    }

    #[test]
    fn exponent_interval_monotone_in_domain() {
        let c = CoefficientField::constant(1.0, 1.0);
        let opts = ExponentOptions {
            grid_n: 128,
            horizon: 120.0,
            windows: 4,
            dt: 0.01,
        };
        let full = exponent_interval(
            &c,
            &BoundaryKind::MixedNeumannDirichlet { length: 4.0 },
            &opts,
        )
        .unwrap();
        let half = exponent_interval(
            &c,
            &BoundaryKind::MixedNeumannDirichlet { length: 2.0 },
            &opts,
        )
        .unwrap();
        assert!(half.lambda_min < full.lambda_min);
        assert!(half.lambda_max < full.lambda_max + 1e-10);
    }

    #[test]
    fn critical_lengths_constant_coefficients() {
        let c = CoefficientField::constant(1.0, 1.0);
        let l1 = critical_length_single(&c, 1e-4).unwrap();
        assert_relative_eq!(l1, PI / 2.0, epsilon = 1e-3);

        let c4 = CoefficientField::constant(4.0, 1.0);
        let l4 = critical_length_single(&c4, 1e-4).unwrap();
        assert_relative_eq!(l4, PI / 4.0, epsilon = 1e-3);
        assert!(l4 < l1);

        let w1 = critical_length_double(&c, 1e-4).unwrap();
        assert_relative_eq!(w1, PI, epsilon = 1e-3);
        let w4 = critical_length_double(&c4, 1e-4).unwrap();
        assert_relative_eq!(w4, PI / 2.0, epsilon = 1e-3);

        // Constant coefficients: the double-front width is twice the
        // single-front length.
        assert_relative_eq!(w1, 2.0 * l1, epsilon = 3e-3);
    }

    #[test]
    fn critical_width_spatial_field_uses_worst_placement() {
        // Growth is weaker on the right half of the window, so the critical
        // width must exceed the homogeneous value at the favorable peak.
        let c = CoefficientField {
            kind: CoefficientKind::SpaceTime,
            a: Sampler::SinSpace {
                offset: 1.5,
                amplitude: 0.5,
                wavelength: 40.0,
            },
            b: Sampler::Constant { value: 1.0 },
            period: 1.0,
            a_inf: 1.0,
            a_sup: 2.0,
            b_inf: 1.0,
            b_sup: 1.0,
            x_window: (0.0, 40.0),
        };
        let w = critical_length_double(&c, 1e-3).unwrap();
        // Bounded by the homogeneous widths at a_sup and a_inf.
        assert!(w >= PI / 2.0f64.sqrt() - 1e-3, "width {w}");
        assert!(w <= PI + 1e-3, "width {w}");
        // The worst placement sits over the trough, where a is close to
        // a_inf = 1 near x = 30; expect the width near pi.
        assert!(w > PI / 1.1, "width {w}");
    }
}
