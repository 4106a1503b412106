//! Single free-boundary evolution in front-fixed coordinates.
//!
//! The moving domain [0, h(t)] is mapped to the reference interval by
//! y = x / h(t). The density w(t, y) = u(t, y h) then satisfies
//!
//! ```text
//! w_t = h⁻² w_yy + (y h'/h) w_y - h⁻² (w (chi1 z1 - chi2 z2)_y)_y + w (a - b w)
//! ```
//!
//! with the potentials solved on the current geometry and the front driven by
//! the Stefan law h' = -nu u_x(t, h). The mapping is a global diffeomorphism,
//! so no cutoff near the initial front is needed; boundary motion appears
//! only through the mesh drift term and the metric factor.

use crate::coeff::CoefficientField;
use crate::elliptic::{combo_diagnostic, gradient_diagnostic, PotentialPair};
use crate::error::SolverError;
use crate::imex::{imex_step, max_drift_speed, BcSide, StepSpec};
use crate::model::{combo_coefficient, density_ceiling, ModelParams};
use crate::profile::Profile;
use serde::{Deserialize, Serialize};

/// Straightened solution snapshot: front position plus grid values on
/// y in [0, 1]. The last node is the front and holds exactly zero.
#[derive(Debug, Clone)]
pub struct FrontState {
    pub t: f64,
    pub h: f64,
    pub u: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

impl FrontState {
    pub fn grid_n(&self) -> usize {
        self.u.len() - 1
    }

    pub fn sup_u(&self) -> f64 {
        self.u.iter().fold(0.0f64, |s, &x| s.max(x))
    }

    /// Infimum of u over physical x in [0, probe], extending by zero beyond
    /// the front. Zero whenever the front has not yet covered the probe.
    pub fn inf_u_probe(&self, probe: f64) -> f64 {
        if self.h <= probe {
            return 0.0;
        }
        let n = self.grid_n();
        let y_cut = probe / self.h;
        let mut inf = f64::INFINITY;
        for i in 0..=n {
            let y = i as f64 / n as f64;
            if y > y_cut {
                // Include the interpolated value at the probe edge.
                let dy = 1.0 / n as f64;
                let w = (y_cut - (y - dy)) / dy;
                if w > 0.0 {
                    inf = inf.min(self.u[i - 1] * (1.0 - w) + self.u[i] * w);
                }
                break;
            }
            inf = inf.min(self.u[i]);
        }
        inf
    }

    /// Linear interpolation of u at physical position x in [0, h].
    pub fn u_at(&self, x: f64) -> f64 {
        if x >= self.h {
            return 0.0;
        }
        let n = self.grid_n();
        let pos = (x / self.h).clamp(0.0, 1.0) * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let w = pos - i as f64;
        self.u[i] * (1.0 - w) + self.u[i + 1] * w
    }
}

/// Sample the initial profile onto the grid and validate compatibility:
/// nonnegative, flat at the closed end, zero at the front.
pub fn make_initial_state(
    h0: f64,
    profile: &Profile,
    grid_n: usize,
    p: &ModelParams,
) -> Result<FrontState, SolverError> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(SolverError::Compatibility(format!(
            "initial front position must be positive, got {h0}"
        )));
    }
    if grid_n < 32 {
        return Err(SolverError::Compatibility(format!(
            "grid_n must be at least 32, got {grid_n}"
        )));
    }
    let mut u = profile.sample_grid(grid_n);
    let dy = 1.0 / grid_n as f64;
    let sup = u.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
    if let Some(bad) = u.iter().find(|x| **x < 0.0) {
        return Err(SolverError::Compatibility(format!(
            "initial profile negative ({bad})"
        )));
    }
    if u[grid_n].abs() > 1e-12 * (1.0 + sup) {
        return Err(SolverError::Compatibility(format!(
            "initial profile must vanish at the front, got {}",
            u[grid_n]
        )));
    }
    // The front node holds exactly zero; snap roundoff-scale residue.
    u[grid_n] = 0.0;
    // One-sided second-order derivative at the closed end.
    let d0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy);
    if d0.abs() > 20.0 * dy * dy * (1.0 + sup) + 1e-10 {
        return Err(SolverError::Compatibility(format!(
            "initial profile must be flat at x = 0, discrete slope {d0}"
        )));
    }
    let pp = PotentialPair::solve(&u, p, h0)?;
    Ok(FrontState {
        t: 0.0,
        h: h0,
        u,
        v1: pp.v1,
        v2: pp.v2,
    })
}

/// Stefan front velocity from the one-sided boundary flux:
/// h' = -nu u_x(t, h), with u_x taken by the second-order three-point stencil
/// in physical coordinates. Nonnegative up to stencil error since u >= 0 and
/// u vanishes at the front.
pub fn stefan_velocity(s: &FrontState, nu: f64) -> f64 {
    let n = s.grid_n();
    let dy = 1.0 / n as f64;
    let u_y = (3.0 * s.u[n] - 4.0 * s.u[n - 1] + s.u[n - 2]) / (2.0 * dy);
    -nu * u_y / s.h
}

fn front_velocity_checked(s: &FrontState, nu: f64) -> Result<f64, SolverError> {
    let hp = stefan_velocity(s, nu);
    if hp >= 0.0 {
        return Ok(hp);
    }
    // Stencil noise on a nonnegative profile is proportional to the local
    // scale; a genuinely retreating front signals a scheme failure.
    let n = s.grid_n() as f64;
    let tol = 1e-9 * (1.0 + nu * s.sup_u() * n / s.h);
    if hp >= -tol {
        Ok(0.0)
    } else {
        Err(SolverError::FrontCollapse {
            t: s.t,
            velocity: hp,
        })
    }
}

/// One IMEX step: potentials on the current geometry, Stefan velocity,
/// advance the density, then the front.
pub fn step(
    s: &FrontState,
    dt: f64,
    p: &ModelParams,
    c: &CoefficientField,
) -> Result<FrontState, SolverError> {
    let n = s.grid_n();
    let dy = 1.0 / n as f64;
    let hp = front_velocity_checked(s, p.nu)?;

    let advection: Vec<f64> = (0..=n).map(|i| i as f64 * dy * hp / s.h).collect();
    let chemo = p.chi1 != 0.0 || p.chi2 != 0.0;
    let phi: Vec<f64> = if chemo {
        (0..=n)
            .map(|i| p.chi1 * s.v1[i] - p.chi2 * s.v2[i])
            .collect()
    } else {
        Vec::new()
    };
    let growth: Vec<f64> = (0..=n)
        .map(|i| c.a(s.t, i as f64 * dy * s.h))
        .collect();
    let damping: Vec<f64> = (0..=n)
        .map(|i| c.b(s.t, i as f64 * dy * s.h))
        .collect();

    let spec = StepSpec {
        t: s.t,
        dt,
        dy,
        inv_len2: 1.0 / (s.h * s.h),
        advection: &advection,
        drift_potential: &phi,
        growth: &growth,
        damping: &damping,
        left: BcSide::Neumann,
        right: BcSide::Dirichlet,
    };
    let u = imex_step(&s.u, &spec)?;

    let h = s.h + dt * hp;
    let t = s.t + dt;
    let pp = PotentialPair::solve(&u, p, h)?;
    Ok(FrontState {
        t,
        h,
        u,
        v1: pp.v1,
        v2: pp.v2,
    })
}

/// Time step selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DtPolicy {
    Fixed { value: f64 },
    /// Advective CFL against the mesh and chemotactic drift plus a reaction
    /// step bound dt <= reaction_factor / (a_sup + b_sup sup u).
    Auto {
        #[serde(default = "default_cfl")]
        cfl: f64,
        #[serde(default = "default_dt_max")]
        max: f64,
    },
}

fn default_cfl() -> f64 {
    0.5
}

fn default_dt_max() -> f64 {
    0.05
}

impl Default for DtPolicy {
    fn default() -> Self {
        DtPolicy::Auto {
            cfl: default_cfl(),
            max: default_dt_max(),
        }
    }
}

pub(crate) const REACTION_DT_FACTOR: f64 = 0.1;

impl DtPolicy {
    /// Step size from the advective CFL and the reaction rate bound;
    /// `reaction_rate` is `a_max + b_max * sup_u` for the step at hand.
    pub(crate) fn bound(&self, drift_speed: f64, dy: f64, reaction_rate: f64) -> f64 {
        let (cfl, cap) = match *self {
            DtPolicy::Fixed { value } => return value,
            DtPolicy::Auto { cfl, max } => (cfl, max),
        };
        let reaction = REACTION_DT_FACTOR / reaction_rate.max(1e-30);
        let advective = if drift_speed > 0.0 {
            cfl * dy / drift_speed
        } else {
            f64::INFINITY
        };
        cap.min(reaction).min(advective)
    }
}

/// One recorded row of a run time series.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub h: f64,
    pub h_prime: f64,
    pub sup_u: f64,
    pub inf_u_window: f64,
    pub combo_residual: f64,
    pub gradient_residual: f64,
    /// Left front; identically zero for the single-front geometry.
    pub g: f64,
    pub g_prime: f64,
}

/// Persisted time series of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSeries {
    pub samples: Vec<Sample>,
    pub config_digest: String,
    /// True when the series carries meaningful left-front columns.
    pub double_front: bool,
}

impl RunSeries {
    pub fn new(config_digest: impl Into<String>, double_front: bool) -> Self {
        RunSeries {
            samples: Vec::new(),
            config_digest: config_digest.into(),
            double_front,
        }
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Samples in the trailing time window of the given fraction of the
    /// recorded span.
    pub fn trailing_window(&self, fraction: f64) -> &[Sample] {
        if self.samples.is_empty() {
            return &self.samples;
        }
        let t0 = self.samples[0].t;
        let t1 = self.samples[self.samples.len() - 1].t;
        let cut = t1 - fraction.clamp(0.0, 1.0) * (t1 - t0);
        let idx = self.samples.partition_point(|s| s.t < cut);
        // Always keep at least the final sample.
        &self.samples[idx.min(self.samples.len() - 1)..]
    }
}

/// Run classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Spreading,
    Vanishing,
    Undetermined,
}

/// Final classification of a run with the front-limit estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Outcome {
    pub verdict: Verdict,
    /// Finite for vanishing runs; serialized as the string "inf" for
    /// spreading runs since JSON has no infinity literal.
    #[serde(serialize_with = "serialize_possibly_infinite")]
    pub h_infinity_estimate: f64,
    pub final_sup_u: f64,
    pub l_star: f64,
}

fn serialize_possibly_infinite<S: serde::Serializer>(
    v: &f64,
    s: S,
) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Shared evolution settings for the front, double-front, and fixed-domain
/// runners.
#[derive(Debug, Clone)]
pub struct EvolveSettings<'a> {
    pub model: &'a ModelParams,
    pub coeff: &'a CoefficientField,
    pub dt: DtPolicy,
    pub t_end: f64,
    /// Front cap; reaching it stops the run on the spreading path.
    pub h_max: f64,
    pub sample_interval: f64,
    /// Probe length for the interior-infimum column.
    pub probe_length: f64,
    /// Slack allowed on the density ceiling assertion.
    pub bound_tol: f64,
    /// Residual tolerance factor, multiplied by the current dx².
    pub residual_tol_factor: f64,
    /// Enforce the ceiling and potential-bound assertions each step. Off only
    /// for explicitly overridden runs outside the damping hypothesis, which
    /// instead abort past `blowup_guard`.
    pub enforce_bounds: bool,
    pub blowup_guard: f64,
    pub snapshot_times: Vec<f64>,
    pub config_digest: String,
}

impl<'a> EvolveSettings<'a> {
    pub fn new(model: &'a ModelParams, coeff: &'a CoefficientField) -> Self {
        EvolveSettings {
            model,
            coeff,
            dt: DtPolicy::default(),
            t_end: 40.0,
            h_max: f64::INFINITY,
            sample_interval: 0.1,
            probe_length: 1.0,
            bound_tol: 1e-3,
            residual_tol_factor: 10.0,
            enforce_bounds: true,
            blowup_guard: 1e3,
            snapshot_times: Vec::new(),
            config_digest: String::new(),
        }
    }

    pub(crate) fn auto_dt(&self, drift_speed: f64, dy: f64, sup_u: f64) -> f64 {
        self.dt.bound(
            drift_speed,
            dy,
            self.coeff.a_sup + self.coeff.b_sup * sup_u,
        )
    }
}

/// Completed run payload.
#[derive(Debug, Clone)]
pub struct RunResult<S> {
    pub series: RunSeries,
    pub snapshots: Vec<S>,
    pub final_state: S,
}

/// A run that aborted mid-flight, with the partial series for diagnostics.
#[derive(Debug)]
pub struct RunAborted {
    pub error: SolverError,
    pub series: RunSeries,
}

impl From<RunAborted> for SolverError {
    fn from(a: RunAborted) -> Self {
        a.error
    }
}

/// March the single-front system to `t_end`, the front cap, or an early-stop
/// verdict, recording samples and enforcing the runtime bounds.
pub fn run(
    initial: FrontState,
    settings: &EvolveSettings,
    early_stop: Option<&dyn Fn(&RunSeries) -> bool>,
) -> Result<RunResult<FrontState>, RunAborted> {
    let mut series = RunSeries::new(settings.config_digest.clone(), false);
    let mut snapshots: Vec<FrontState> = Vec::new();
    let mut snapshot_times = settings.snapshot_times.clone();
    snapshot_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    snapshot_times.reverse(); // pop() yields ascending times

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
        let hp = match front_velocity_checked(&state, p.nu) {
            Ok(v) => v,
            Err(e) => return Err(fail(e, series)),
        };

        // Per-step invariants.
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
                // Above the ceiling the sup norm must not increase.
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

        let dx = state.h / state.grid_n() as f64;
        let combo_diag = combo_diagnostic(&state.v1, &state.v2, &state.u, p, combo, dx);
        let grad_diag = gradient_diagnostic(&state.v1, &state.v2, &state.u, p, dx);
        let residual_tol = settings.residual_tol_factor * dx * dx;
        if settings.enforce_bounds {
            if combo_diag.residual > residual_tol {
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
            if grad_diag.residual > residual_tol {
                return Err(fail(
                    SolverError::BoundViolation {
                        t: state.t,
                        what: "drift gradient residual",
                        value: grad_diag.residual,
                        limit: residual_tol,
                    },
                    series,
                ));
            }
        }

        // Sampling, snapshots, termination checks.
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

        let done = state.t >= settings.t_end
            || state.h >= settings.h_max
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
                    g: 0.0,
                    g_prime: 0.0,
                });
            }
            return Ok(RunResult {
                series,
                snapshots,
                final_state: state,
            });
        }

        // Advance.
        let n = state.grid_n();
        let dy = 1.0 / n as f64;
        let chemo_speed = if p.chi1 != 0.0 || p.chi2 != 0.0 {
            let phi: Vec<f64> = (0..=n)
                .map(|i| p.chi1 * state.v1[i] - p.chi2 * state.v2[i])
                .collect();
            max_drift_speed(&phi, dy, 1.0 / (state.h * state.h))
        } else {
            0.0
        };
        let mesh_speed = hp / state.h;
        let dt_raw = settings.auto_dt(chemo_speed + mesh_speed, dy, sup_u);
        let dt = dt_raw.min(settings.t_end - state.t).max(1e-12);
        state = match step(&state, dt, p, settings.coeff) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, series)),
        };
    }
}
