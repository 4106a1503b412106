//! Fixed-domain companion solvers: the truncated half-line chemotaxis
//! system, single-species equations with drift on bounded intervals, and the
//! periodic logistic ODE.
//!
//! These supply the comparison dynamics for the free-boundary runs: interior
//! persistence bands for the half-line system, persistence/decay verdicts
//! tied to the sign of the principal eigenvalue for the drift equations, and
//! the spatially-flat limit orbit spreading solutions converge to.

use crate::coeff::{CoefficientField, Sampler};
use crate::elliptic::{combo_diagnostic, gradient_diagnostic, PotentialPair};
use crate::error::SolverError;
use crate::frontsolver::{EvolveSettings, RunAborted, RunResult, RunSeries, Sample};
use crate::imex::{imex_step, max_drift_speed, BcSide, StepSpec};
use crate::model::{combo_coefficient, density_ceiling, ModelParams};
use crate::profile::Profile;

/// Half-line truncation state on [0, L]; both u-ends are zero-flux, the
/// right one artificial.
#[derive(Debug, Clone)]
pub struct HalfLineState {
    pub t: f64,
    pub length: f64,
    pub u: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

impl HalfLineState {
    pub fn grid_n(&self) -> usize {
        self.u.len() - 1
    }

    pub fn sup_u(&self) -> f64 {
        self.u.iter().fold(0.0f64, |s, &x| s.max(x))
    }

    /// Min over x in [0, probe].
    pub fn inf_u_probe(&self, probe: f64) -> f64 {
        let n = self.grid_n();
        let cut = ((probe / self.length).clamp(0.0, 1.0) * n as f64).ceil() as usize;
        self.u[..=cut.min(n)]
            .iter()
            .fold(f64::INFINITY, |s, &x| s.min(x))
    }

    /// Linear interpolation of u at physical position x in [0, length].
    pub fn u_at(&self, x: f64) -> f64 {
        let n = self.grid_n();
        let pos = (x / self.length).clamp(0.0, 1.0) * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let w = pos - i as f64;
        self.u[i] * (1.0 - w) + self.u[i + 1] * w
    }

    /// (min, max) over the interior excluding a right boundary layer of the
    /// given fraction of the length.
    pub fn interior_band(&self, layer_fraction: f64) -> (f64, f64) {
        let n = self.grid_n();
        let cut = (((1.0 - layer_fraction).clamp(0.0, 1.0)) * n as f64).floor() as usize;
        let slice = &self.u[..=cut.min(n)];
        let min = slice.iter().fold(f64::INFINITY, |s, &x| s.min(x));
        let max = slice.iter().fold(f64::NEG_INFINITY, |s, &x| s.max(x));
        (min, max)
    }
}

pub fn make_initial_halfline(
    length: f64,
    profile: &Profile,
    grid_n: usize,
    p: &ModelParams,
) -> Result<HalfLineState, SolverError> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(SolverError::Compatibility(format!(
            "truncation length must be positive, got {length}"
        )));
    }
    if grid_n < 32 {
        return Err(SolverError::Compatibility(format!(
            "grid_n must be at least 32, got {grid_n}"
        )));
    }
    let u = profile.sample_grid(grid_n);
    if let Some(bad) = u.iter().find(|x| **x < 0.0) {
        return Err(SolverError::Compatibility(format!(
            "initial profile negative ({bad})"
        )));
    }
    let pp = PotentialPair::solve(&u, p, length)?;
    Ok(HalfLineState {
        t: 0.0,
        length,
        u,
        v1: pp.v1,
        v2: pp.v2,
    })
}

/// March the half-line system: the front machinery without front motion.
pub fn run_halfline(
    initial: HalfLineState,
    settings: &EvolveSettings,
    early_stop: Option<&dyn Fn(&RunSeries) -> bool>,
) -> Result<RunResult<HalfLineState>, RunAborted> {
    let mut series = RunSeries::new(settings.config_digest.clone(), false);
    let mut snapshots: Vec<HalfLineState> = Vec::new();
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
    let mut next_sample = state.t;
    let n = state.grid_n();
    let dy = 1.0 / n as f64;
    let len = state.length;
    let dx = len * dy;
    let inv_len2 = 1.0 / (len * len);
    let advection = vec![0.0f64; n + 1];

    let fail = |error: SolverError, series: RunSeries| RunAborted { error, series };

    loop {
        let sup_u = state.sup_u();
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
        } else if sup_u > settings.blowup_guard {
            return Err(fail(SolverError::BlowUp { t: state.t, sup_u }, series));
        }

        let combo_diag = combo_diagnostic(&state.v1, &state.v2, &state.u, p, combo, dx);
        let grad_diag = gradient_diagnostic(&state.v1, &state.v2, &state.u, p, dx);
        let residual_tol = settings.residual_tol_factor * dx * dx;
        if settings.enforce_bounds && combo_diag.residual > residual_tol {
            return Err(fail(
                SolverError::BoundViolation {
                    t: state.t,
                    what: "potential combination residual",
                    value: combo_diag.residual,
                    limit: residual_tol,
                },
                series,
            ));
        }

        let mut sampled = false;
        if state.t + 1e-12 >= next_sample {
            series.samples.push(Sample {
                t: state.t,
                h: len,
                h_prime: 0.0,
                sup_u,
                inf_u_window: state.inf_u_probe(settings.probe_length),
                combo_residual: combo_diag.residual,
                gradient_residual: grad_diag.residual,
                g: 0.0,
                g_prime: 0.0,
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

        let done =
            state.t >= settings.t_end || (sampled && early_stop.is_some_and(|f| f(&series)));
        if done {
            return Ok(RunResult {
                series,
                snapshots,
                final_state: state,
            });
        }

        let chemo = p.chi1 != 0.0 || p.chi2 != 0.0;
        let phi: Vec<f64> = if chemo {
            (0..=n)
                .map(|i| p.chi1 * state.v1[i] - p.chi2 * state.v2[i])
                .collect()
        } else {
            Vec::new()
        };
        let chemo_speed = if chemo {
            max_drift_speed(&phi, dy, inv_len2)
        } else {
            0.0
        };
        let growth: Vec<f64> = (0..=n).map(|i| settings.coeff.a(state.t, i as f64 * dx)).collect();
        let damping: Vec<f64> = (0..=n).map(|i| settings.coeff.b(state.t, i as f64 * dx)).collect();
        let dt = settings
            .auto_dt(chemo_speed, dy, sup_u)
            .min(settings.t_end - state.t)
            .max(1e-12);
        let spec = StepSpec {
            t: state.t,
            dt,
            dy,
            inv_len2,
            advection: &advection,
            drift_potential: &phi,
            growth: &growth,
            damping: &damping,
            left: BcSide::Neumann,
            right: BcSide::Neumann,
        };
        let u = match imex_step(&state.u, &spec) {
            Ok(u) => u,
            Err(e) => return Err(fail(e, series)),
        };
        let pp = match PotentialPair::solve(&u, p, len) {
            Ok(pp) => pp,
            Err(e) => return Err(fail(e, series)),
        };
        state = HalfLineState {
            t: state.t + dt,
            length: len,
            u,
            v1: pp.v1,
            v2: pp.v2,
        };
    }
}

/// Scalar state for the single-species drift equations.
#[derive(Debug, Clone)]
pub struct FixedState {
    pub t: f64,
    /// Left end of the physical interval.
    pub left: f64,
    /// Interval length.
    pub length: f64,
    pub u: Vec<f64>,
}

impl FixedState {
    pub fn sup_u(&self) -> f64 {
        self.u.iter().fold(0.0f64, |s, &x| s.max(x))
    }

    /// Linear interpolation of u at physical position x.
    pub fn u_at(&self, x: f64) -> f64 {
        let n = self.u.len() - 1;
        let pos = ((x - self.left) / self.length).clamp(0.0, 1.0) * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let w = pos - i as f64;
        self.u[i] * (1.0 - w) + self.u[i + 1] * w
    }
}

/// Boundary layout of the scalar companion equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScalarBc {
    /// Zero flux left, absorbing right.
    MixedOnZeroL,
    /// Absorbing at both ends.
    DirichletBoth,
}

#[allow(clippy::too_many_arguments)]
fn run_scalar(
    mut u: Vec<f64>,
    left_end: f64,
    length: f64,
    beta: Option<&Sampler>,
    a_of: &dyn Fn(f64, f64) -> f64,
    b_of: &dyn Fn(f64, f64) -> f64,
    bc: ScalarBc,
    settings: &EvolveSettings,
) -> Result<(RunSeries, FixedState), RunAborted> {
    let mut series = RunSeries::new(settings.config_digest.clone(), false);
    let n = u.len() - 1;
    let dy = 1.0 / n as f64;
    let inv_len2 = 1.0 / (length * length);
    let mut t = 0.0f64;
    let mut next_sample = 0.0f64;
    let (bc_left, bc_right) = match bc {
        ScalarBc::MixedOnZeroL => (BcSide::Neumann, BcSide::Dirichlet),
        ScalarBc::DirichletBoth => (BcSide::Dirichlet, BcSide::Dirichlet),
    };
    if bc_left == BcSide::Dirichlet {
        u[0] = 0.0;
    }
    if bc_right == BcSide::Dirichlet {
        u[n] = 0.0;
    }

    loop {
        let sup_u = u.iter().fold(0.0f64, |s, &x| s.max(x));
        let inf_probe = {
            let cut = ((settings.probe_length / length).clamp(0.0, 1.0) * n as f64).ceil() as usize;
            u[..=cut.min(n)].iter().fold(f64::INFINITY, |s, &x| s.min(x))
        };
        let mut sampled = false;
        if t + 1e-12 >= next_sample {
            series.samples.push(Sample {
                t,
                h: left_end + length,
                h_prime: 0.0,
                sup_u,
                inf_u_window: inf_probe,
                combo_residual: 0.0,
                gradient_residual: 0.0,
                g: left_end,
                g_prime: 0.0,
            });
            while next_sample <= t + 1e-12 {
                next_sample += settings.sample_interval;
            }
            sampled = true;
        }
        let _ = sampled;
        if t >= settings.t_end {
            return Ok((
                series,
                FixedState {
                    t,
                    left: left_end,
                    length,
                    u,
                },
            ));
        }

        // Drift enters the reference interval scaled by 1/length.
        let advection: Vec<f64> = match beta {
            Some(s) => (0..=n)
                .map(|i| s.eval(t, left_end + i as f64 * dy * length) / length)
                .collect(),
            None => vec![0.0; n + 1],
        };
        let drift_speed = advection.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
        let growth: Vec<f64> = (0..=n)
            .map(|i| a_of(t, left_end + i as f64 * dy * length))
            .collect();
        let damping: Vec<f64> = (0..=n)
            .map(|i| b_of(t, left_end + i as f64 * dy * length))
            .collect();
        // The reaction bound comes from the runner's own coefficients, which
        // need not match the field in settings (the absorbing-ends variant
        // carries its own constants).
        let a_max = growth.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
        let b_max = damping.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
        let dt = settings
            .dt
            .bound(drift_speed, dy, a_max + b_max * sup_u)
            .min(settings.t_end - t)
            .max(1e-12);
        let spec = StepSpec {
            t,
            dt,
            dy,
            inv_len2,
            advection: &advection,
            drift_potential: &[],
            growth: &growth,
            damping: &damping,
            left: bc_left,
            right: bc_right,
        };
        u = match imex_step(&u, &spec) {
            Ok(v) => v,
            Err(e) => {
                return Err(RunAborted { error: e, series });
            }
        };
        t += dt;
    }
}

/// Single-species equation with drift on [0, l]: zero flux at 0, absorbing at
/// l. Persistence tracks the sign of the principal exponent when the drift
/// is small.
pub fn run_fixed_mixed(
    beta: Option<&Sampler>,
    c: &CoefficientField,
    l: f64,
    u0: Vec<f64>,
    settings: &EvolveSettings,
) -> Result<(RunSeries, FixedState), RunAborted> {
    run_scalar(
        u0,
        0.0,
        l,
        beta,
        &|t, x| c.a(t, x),
        &|t, x| c.b(t, x),
        ScalarBc::MixedOnZeroL,
        settings,
    )
}

/// Single-species equation with drift and constant coefficients on [l1, l2],
/// absorbing at both ends.
#[allow(clippy::too_many_arguments)]
pub fn run_fixed_dirichlet(
    beta: Option<&Sampler>,
    a0: f64,
    b0: f64,
    l1: f64,
    l2: f64,
    u0: Vec<f64>,
    settings: &EvolveSettings,
) -> Result<(RunSeries, FixedState), RunAborted> {
    run_scalar(
        u0,
        l1,
        l2 - l1,
        beta,
        &move |_, _| a0,
        &move |_, _| b0,
        ScalarBc::DirichletBoth,
        settings,
    )
}

/// Dense periodic orbit with ODE-consistent slopes for cubic Hermite
/// evaluation at arbitrary times.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub period: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl PeriodicOrbit {
    pub fn constant(value: f64, period: f64) -> Self {
        PeriodicOrbit {
            period,
            values: vec![value; 2],
            slopes: vec![0.0; 2],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let m = self.values.len() - 1;
        let tau = t.rem_euclid(self.period) / self.period * m as f64;
        let i = (tau.floor() as usize).min(m - 1);
        let s = tau - i as f64;
        let dt = self.period / m as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * dt, self.slopes[i + 1] * dt);
        // Cubic Hermite basis.
        let s2 = s * s;
        let s3 = s2 * s;
        y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + d0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + d1 * (s3 - s2)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |s, &x| s.max(x))
    }
}

const ORBIT_STEPS: usize = 2048;

fn logistic_rhs(a: f64, b: f64, u: f64) -> f64 {
    u * (a - b * u)
}

/// One classical fourth-order step of u' = u (a(t) - b(t) u).
fn rk4_step(a: &Sampler, b: &Sampler, t: f64, u: f64, dt: f64) -> f64 {
    let f = |t: f64, u: f64| logistic_rhs(a.eval(t, 0.0), b.eval(t, 0.0), u);
    let k1 = f(t, u);
    let k2 = f(t + 0.5 * dt, u + 0.5 * dt * k1);
    let k3 = f(t + 0.5 * dt, u + 0.5 * dt * k2);
    let k4 = f(t + dt, u + dt * k3);
    u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

fn period_map(a: &Sampler, b: &Sampler, period: f64, u0: f64) -> f64 {
    let dt = period / ORBIT_STEPS as f64;
    let mut u = u0;
    for k in 0..ORBIT_STEPS {
        u = rk4_step(a, b, k as f64 * dt, u, dt);
    }
    u
}

/// The unique positive periodic entire solution of u' = u (a(t) - b(t) u).
///
/// Constants return a/b exactly. Periodic coefficients are handled by damped
/// fixed-point iteration on the period map, started from a_inf/b_sup and
/// integrated with a classical fourth-order one-step method, until successive
/// period-start values differ by less than 1e-10.
pub fn logistic_entire_solution(
    a: &Sampler,
    b: &Sampler,
    period: f64,
) -> Result<PeriodicOrbit, SolverError> {
    if a.is_time_independent() && b.is_time_independent() {
        let av = a.eval(0.0, 0.0);
        let bv = b.eval(0.0, 0.0);
        return Ok(PeriodicOrbit::constant(av / bv, period));
    }

    // Conservative positive starting point below the orbit.
    let probe = |s: &Sampler, f: fn(f64, f64) -> f64, init: f64| {
        (0..=512)
            .map(|k| s.eval(period * k as f64 / 512.0, 0.0))
            .fold(init, f)
    };
    let a_inf = probe(a, f64::min, f64::INFINITY);
    let b_sup = probe(b, f64::max, f64::NEG_INFINITY);
    if !(a_inf > 0.0 && b_sup > 0.0) {
        return Err(SolverError::FixedPointDiverged {
            iterations: 0,
            gap: f64::NAN,
        });
    }

    // Converge well past the documented 1e-10 so the orbit seam at t = 0 is
    // smooth enough for high-order differencing in downstream checks.
    let mut u = a_inf / b_sup;
    let mut gap = f64::INFINITY;
    for _ in 0..20_000 {
        let mapped = period_map(a, b, period, u);
        gap = (mapped - u).abs();
        if gap < 1e-13 {
            u = mapped;
            break;
        }
        u = 0.5 * (u + mapped);
    }
    if gap >= 1e-10 {
        return Err(SolverError::FixedPointDiverged {
            iterations: 20_000,
            gap,
        });
    }

    // Dense orbit with ODE slopes for Hermite evaluation.
    let dt = period / ORBIT_STEPS as f64;
    let mut values = Vec::with_capacity(ORBIT_STEPS + 1);
    let mut slopes = Vec::with_capacity(ORBIT_STEPS + 1);
    let mut v = u;
    for k in 0..=ORBIT_STEPS {
        let t = k as f64 * dt;
        values.push(v);
        slopes.push(logistic_rhs(a.eval(t, 0.0), b.eval(t, 0.0), v));
        if k < ORBIT_STEPS {
            v = rk4_step(a, b, t, v, dt);
        }
    }
    Ok(PeriodicOrbit {
        period,
        values,
        slopes,
    })
}
