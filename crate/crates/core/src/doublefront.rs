//! Double free-boundary evolution: both endpoints of [g(t), h(t)] move by
//! Stefan laws, the left one leftward, the right one rightward.
//!
//! The straightening x = g + y (h - g) shares the single-front machinery on
//! one grid: metric factor (h-g)⁻², mesh drift ((1-y) g' + y h')/(h-g), and
//! mirrored one-sided Stefan stencils so even data stays even to stencil
//! order.

use crate::coeff::CoefficientField;
use crate::elliptic::{combo_diagnostic, gradient_diagnostic, PotentialPair};
use crate::error::SolverError;
use crate::frontsolver::{EvolveSettings, RunAborted, RunResult, RunSeries, Sample};
use crate::imex::{imex_step, max_drift_speed, BcSide, StepSpec};
use crate::model::{combo_coefficient, density_ceiling, ModelParams};
use crate::profile::Profile;

/// Snapshot of the double-front system on y in [0, 1], x = g + y (h - g).
/// Both end nodes hold exactly zero.
#[derive(Debug, Clone)]
pub struct DoubleFrontState {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub u: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

impl DoubleFrontState {
    pub fn grid_n(&self) -> usize {
        self.u.len() - 1
    }

    pub fn width(&self) -> f64 {
        self.h - self.g
    }

    pub fn sup_u(&self) -> f64 {
        self.u.iter().fold(0.0f64, |s, &x| s.max(x))
    }

    /// Infimum of u over the fixed window |x| <= probe/2, extending by zero
    /// outside the domain.
    pub fn inf_u_probe(&self, probe: f64) -> f64 {
        let lo = -0.5 * probe;
        let hi = 0.5 * probe;
        if self.g > lo || self.h < hi {
            return 0.0;
        }
        let n = self.grid_n();
        let d = self.width();
        let mut inf = f64::INFINITY;
        for i in 0..=n {
            let x = self.g + d * i as f64 / n as f64;
            if x >= lo && x <= hi {
                inf = inf.min(self.u[i]);
            }
        }
        inf = inf.min(self.u_at(lo)).min(self.u_at(hi));
        inf
    }

    /// Linear interpolation of u at physical position x.
    pub fn u_at(&self, x: f64) -> f64 {
        if x <= self.g || x >= self.h {
            return 0.0;
        }
        let n = self.grid_n();
        let pos = ((x - self.g) / self.width()).clamp(0.0, 1.0) * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let w = pos - i as f64;
        self.u[i] * (1.0 - w) + self.u[i + 1] * w
    }
}

/// Sample the profile onto the grid and validate: nonnegative and vanishing
/// at both fronts.
pub fn make_initial_double(
    g0: f64,
    h0: f64,
    profile: &Profile,
    grid_n: usize,
    p: &ModelParams,
) -> Result<DoubleFrontState, SolverError> {
    if !(g0 < h0 && g0.is_finite() && h0.is_finite()) {
        return Err(SolverError::Compatibility(format!(
            "need g0 < h0, got [{g0}, {h0}]"
        )));
    }
    if grid_n < 32 {
        return Err(SolverError::Compatibility(format!(
            "grid_n must be at least 32, got {grid_n}"
        )));
    }
    let mut u = profile.sample_grid(grid_n);
    let sup = u.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
    if let Some(bad) = u.iter().find(|x| **x < 0.0) {
        return Err(SolverError::Compatibility(format!(
            "initial profile negative ({bad})"
        )));
    }
    for (label, v) in [("left", u[0]), ("right", u[grid_n])] {
        if v.abs() > 1e-12 * (1.0 + sup) {
            return Err(SolverError::Compatibility(format!(
                "initial profile must vanish at the {label} front, got {v}"
            )));
        }
    }
    // Front nodes hold exactly zero; snap roundoff-scale residue.
    u[0] = 0.0;
    u[grid_n] = 0.0;
    let pp = PotentialPair::solve(&u, p, h0 - g0)?;
    Ok(DoubleFrontState {
        t: 0.0,
        g: g0,
        h: h0,
        u,
        v1: pp.v1,
        v2: pp.v2,
    })
}

/// Front velocities (g', h') from mirrored one-sided stencils.
pub fn front_velocities(s: &DoubleFrontState, nu: f64) -> (f64, f64) {
    let n = s.grid_n();
    let dy = 1.0 / n as f64;
    let d = s.width();
    let uy_right = (3.0 * s.u[n] - 4.0 * s.u[n - 1] + s.u[n - 2]) / (2.0 * dy);
    let uy_left = (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / (2.0 * dy);
    (-nu * uy_left / d, -nu * uy_right / d)
}

fn velocities_checked(s: &DoubleFrontState, nu: f64) -> Result<(f64, f64), SolverError> {
    let (gp, hp) = front_velocities(s, nu);
    let n = s.grid_n() as f64;
    let tol = 1e-9 * (1.0 + nu * s.sup_u() * n / s.width());
    let hp = if hp >= 0.0 {
        hp
    } else if hp >= -tol {
        0.0
    } else {
        return Err(SolverError::FrontCollapse {
            t: s.t,
            velocity: hp,
        });
    };
    let gp = if gp <= 0.0 {
        gp
    } else if gp <= tol {
        0.0
    } else {
        return Err(SolverError::FrontCollapse {
            t: s.t,
            velocity: -gp,
        });
    };
    Ok((gp, hp))
}

/// One IMEX step of the double-front system.
pub fn step_double(
    s: &DoubleFrontState,
    dt: f64,
    p: &ModelParams,
    c: &CoefficientField,
) -> Result<DoubleFrontState, SolverError> {
    let n = s.grid_n();
    let dy = 1.0 / n as f64;
    let d = s.width();
    let (gp, hp) = velocities_checked(s, p.nu)?;

    let advection: Vec<f64> = (0..=n)
        .map(|i| {
            let y = i as f64 * dy;
            ((1.0 - y) * gp + y * hp) / d
        })
        .collect();
    let chemo = p.chi1 != 0.0 || p.chi2 != 0.0;
    let phi: Vec<f64> = if chemo {
        (0..=n)
            .map(|i| p.chi1 * s.v1[i] - p.chi2 * s.v2[i])
            .collect()
    } else {
        Vec::new()
    };
    let growth: Vec<f64> = (0..=n)
        .map(|i| c.a(s.t, s.g + i as f64 * dy * d))
        .collect();
    let damping: Vec<f64> = (0..=n)
        .map(|i| c.b(s.t, s.g + i as f64 * dy * d))
        .collect();

    let spec = StepSpec {
        t: s.t,
        dt,
        dy,
        inv_len2: 1.0 / (d * d),
        advection: &advection,
        drift_potential: &phi,
        growth: &growth,
        damping: &damping,
        left: BcSide::Dirichlet,
        right: BcSide::Dirichlet,
    };
    let u = imex_step(&s.u, &spec)?;

    let g = s.g + dt * gp;
    let h = s.h + dt * hp;
    if g >= h {
        return Err(SolverError::FrontsCrossed {
            t: s.t + dt,
            left: g,
            right: h,
        });
    }
    let pp = PotentialPair::solve(&u, p, h - g)?;
    Ok(DoubleFrontState {
        t: s.t + dt,
        g,
        h,
        u,
        v1: pp.v1,
        v2: pp.v2,
    })
}

/// March the double-front system; samples carry both fronts and their
/// velocities. The spreading cap requires both |g| and h to exceed `h_max`.
pub fn run_double(
    initial: DoubleFrontState,
    settings: &EvolveSettings,
    early_stop: Option<&dyn Fn(&RunSeries) -> bool>,
) -> Result<RunResult<DoubleFrontState>, RunAborted> {
    let mut series = RunSeries::new(settings.config_digest.clone(), true);
    let mut snapshots: Vec<DoubleFrontState> = Vec::new();
    let mut snapshot_times = settings.snapshot_times.clone();
    snapshot_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    snapshot_times.reverse();

    let p = settings.model;
    let ceiling = density_ceiling(p, settings.coeff).ok();
    let c0 = match ceiling {
        Some(m0) => initial.sup_u().max(m0),
        None => f64::INFINITY,
    };
    let combo = combo_coefficient(p);

    let mut state = initial;
    let mut prev_sup = state.sup_u();
    let mut next_sample = state.t;

    let fail = |error: SolverError, series: RunSeries| RunAborted { error, series };

    loop {
        let sup_u = state.sup_u();
        let (gp, hp) = match velocities_checked(&state, p.nu) {
            Ok(v) => v,
            Err(e) => return Err(fail(e, series)),
        };

        if settings.enforce_bounds {
            if sup_u > c0 + settings.bound_tol {
                return Err(fail(
                    SolverError::BoundViolation {
                        t: state.t,
                        what: "sup u vs density ceiling",
                        value: sup_u,
                        limit: c0 + settings.bound_tol,
                    },
                    series,
                ));
            }
            if let Some(m0) = ceiling {
                if prev_sup > m0 + settings.bound_tol
                    && sup_u > prev_sup + 1e-9 * prev_sup.max(1.0)
                {
                    return Err(fail(
                        SolverError::BoundViolation {
                            t: state.t,
                            what: "sup u increased above the ceiling",
                            value: sup_u,
                            limit: prev_sup,
                        },
                        series,
                    ));
                }
            }
        } else if sup_u > settings.blowup_guard {
            return Err(fail(SolverError::BlowUp { t: state.t, sup_u }, series));
        }
        prev_sup = sup_u;

        let dx = state.width() / state.grid_n() as f64;
        let combo_diag = combo_diagnostic(&state.v1, &state.v2, &state.u, p, combo, dx);
        let grad_diag = gradient_diagnostic(&state.v1, &state.v2, &state.u, p, dx);
        let residual_tol = settings.residual_tol_factor * dx * dx;
        if settings.enforce_bounds {
            for (what, diag) in [
                ("potential combination residual", &combo_diag),
                ("drift gradient residual", &grad_diag),
            ] {
                if diag.residual > residual_tol {
                    return Err(fail(
                        SolverError::BoundViolation {
                            t: state.t,
                            what,
                            value: diag.residual,
                            limit: residual_tol,
                        },
                        series,
                    ));
                }
            }
        }

        let mut sampled = false;
        if state.t + 1e-12 >= next_sample {
            series.samples.push(Sample {
                t: state.t,
                h: state.h,
                h_prime: hp,
                sup_u,
                inf_u_window: state.inf_u_probe(settings.probe_length),
                combo_residual: combo_diag.residual,
                gradient_residual: grad_diag.residual,
                g: state.g,
                g_prime: gp,
            });
            while next_sample <= state.t + 1e-12 {
                next_sample += settings.sample_interval;
            }
            sampled = true;
        }
        while snapshot_times
            .last()
            .is_some_and(|ts| state.t + 1e-12 >= *ts)
        {
            snapshot_times.pop();
            snapshots.push(state.clone());
        }

        let capped = state.h >= settings.h_max && -state.g >= settings.h_max;
        let done = state.t >= settings.t_end
            || capped
            || (sampled && early_stop.is_some_and(|f| f(&series)));
        if done {
            if !sampled {
                series.samples.push(Sample {
                    t: state.t,
                    h: state.h,
                    h_prime: hp,
                    sup_u,
                    inf_u_window: state.inf_u_probe(settings.probe_length),
                    combo_residual: combo_diag.residual,
                    gradient_residual: grad_diag.residual,
                    g: state.g,
                    g_prime: gp,
                });
            }
            return Ok(RunResult {
                series,
                snapshots,
                final_state: state,
            });
        }

        let n = state.grid_n();
        let dy = 1.0 / n as f64;
        let d = state.width();
        let chemo_speed = if p.chi1 != 0.0 || p.chi2 != 0.0 {
            let phi: Vec<f64> = (0..=n)
                .map(|i| p.chi1 * state.v1[i] - p.chi2 * state.v2[i])
                .collect();
            max_drift_speed(&phi, dy, 1.0 / (d * d))
        } else {
            0.0
        };
        let mesh_speed = (hp.abs().max(gp.abs())) / d;
        let dt_raw = settings.auto_dt(chemo_speed + mesh_speed, dy, sup_u);
        let dt = dt_raw.min(settings.t_end - state.t).max(1e-12);
        state = match step_double(&state, dt, p, settings.coeff) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, series)),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoefficientField;

    #[test]
    fn zero_state_freezes_fronts() {
        let p = ModelParams::no_chemotaxis(1.0);
        let c = CoefficientField::constant(1.0, 1.0);
        let s0 = make_initial_double(-1.0, 1.0, &Profile::Zero, 64, &p).unwrap();
        let s1 = step_double(&s0, 1e-2, &p, &c).unwrap();
        assert_eq!(s1.g, -1.0);
        assert_eq!(s1.h, 1.0);
    }

    #[test]
    fn symmetric_data_moves_fronts_oppositely() {
        let p = ModelParams::no_chemotaxis(1.0);
        let c = CoefficientField::constant(1.0, 1.0);
        let mut s = make_initial_double(-2.0, 2.0, &Profile::SinPi { amplitude: 0.5 }, 64, &p)
            .unwrap();
        for _ in 0..200 {
            let (gp, hp) = front_velocities(&s, 1.0);
            assert!((gp + hp).abs() < 1e-10, "velocities not mirrored: {gp} {hp}");
            s = step_double(&s, 2e-3, &p, &c).unwrap();
            assert!((s.g + s.h).abs() < 1e-10, "fronts lost symmetry");
        }
        assert!(s.h > 2.0);
    }

    #[test]
    fn initial_data_must_vanish_at_both_fronts() {
        let p = ModelParams::no_chemotaxis(1.0);
        assert!(make_initial_double(
            -1.0,
            1.0,
            &Profile::CosHalf { amplitude: 1.0 },
            64,
            &p
        )
        .is_err());
    }
}
