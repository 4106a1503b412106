//! Execute one configured run end to end: validate, resolve auto knobs,
//! evolve, classify, persist.

use crate::coeff::CoefficientField;
use crate::doublefront::{make_initial_double, run_double};
use crate::error::{ConfigError, SolverError, SpectrumError};
use crate::fixeddomain::{
    make_initial_halfline, run_fixed_dirichlet, run_fixed_mixed, run_halfline,
};
use crate::frontsolver::{
    make_initial_state, run, EvolveSettings, Outcome, RunAborted, RunSeries, Verdict,
};
use crate::harness::classify::{classify, classify_double};
use crate::harness::config::{Geometry, RunConfig};
use crate::harness::output::{write_json, write_series_csv, write_snapshot_csv};
use crate::model::{check_hypotheses, HypothesisReport};
use crate::spectrum::{critical_length_double, critical_length_single};
use serde::Serialize;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Failure taxonomy aligned with the CLI exit codes.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("run failed: {0}")]
    Run(#[from] SolverError),

    #[error("spectrum computation failed: {0}")]
    Spectrum(#[from] SpectrumError),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Run(_) | HarnessError::Spectrum(_) | HarnessError::Io(_) => 3,
            HarnessError::Assertion(_) => 4,
        }
    }
}

/// A snapshot time paired with (x, u) samples on the reference window.
pub type SnapshotProfile = (f64, Vec<(f64, f64)>);

/// A snapshot time paired with raw grid vectors (u, v1, v2).
type SnapshotGrids = (f64, Vec<f64>, Vec<f64>, Vec<f64>);

/// Everything a finished run leaves behind.
#[derive(Debug, Clone, Serialize)]
pub struct RunArtifacts {
    pub digest: String,
    pub grid_n: usize,
    pub l_star: f64,
    pub outcome: Outcome,
    pub hypotheses: HypothesisReport,
    pub series_path: PathBuf,
    pub manifest_path: PathBuf,
    pub snapshot_paths: Vec<PathBuf>,
    pub final_t: f64,
    /// Final density sampled on the geometry's reference window
    /// (single front: [0, 1]; double front: [-1, 1]; fixed domains: the
    /// interior), as (x, u) pairs.
    pub interior_profile: Vec<(f64, f64)>,
    /// Snapshot states sampled on the same reference window, as
    /// (t, profile) pairs.
    pub snapshot_profiles: Vec<SnapshotProfile>,
}

/// Critical length used for auto knobs, dispatched by geometry: the mixed
/// linearization for single fronts and the half line, the double-Dirichlet
/// one for double fronts.
fn critical_length_for(config: &RunConfig, field: &CoefficientField) -> Result<f64, SpectrumError> {
    match config.geometry {
        Geometry::Double { .. } => critical_length_double(field, 1e-4),
        _ => critical_length_single(field, 1e-4),
    }
}

/// Run a config to completion, writing the series CSV, snapshots, and a JSON
/// manifest into `out_dir`. On abort the partial series is still written.
pub fn execute_run(
    config: &RunConfig,
    out_dir: &Path,
    allow_h1_violation: bool,
) -> Result<RunArtifacts, HarnessError> {
    let field = config.validate()?;
    let digest = config.digest();
    let hypotheses = check_hypotheses(&config.model, &field);
    if !hypotheses.global_existence && !allow_h1_violation {
        return Err(ConfigError::Validation(format!(
            "damping hypothesis fails (margin {:.6}); pass --allow-h1-violation to explore anyway",
            hypotheses.margin_global
        ))
        .into());
    }

    let l_star = critical_length_for(config, &field)?;
    let h_max = config.run.h_max.resolve(|| 50.0 * l_star);
    let probe = config.classify.probe_length.resolve(|| match config.geometry {
        Geometry::Halfline { length } => 0.9 * length,
        _ => l_star,
    });
    let thresholds = config.classify.thresholds(h_max);
    thresholds.validate().map_err(ConfigError::Validation)?;

    let mut settings = EvolveSettings::new(&config.model, &field);
    settings.dt = config.time.dt;
    settings.t_end = config.time.t_end;
    settings.h_max = h_max;
    settings.sample_interval = config.run.sample_interval;
    settings.probe_length = probe;
    settings.bound_tol = config.run.bound_tol;
    settings.residual_tol_factor = config.run.residual_tol_factor;
    settings.enforce_bounds = hypotheses.global_existence;
    settings.blowup_guard = config.run.blowup_guard;
    settings.snapshot_times = config.run.snapshot_times.clone();
    settings.config_digest = digest.clone();

    std::fs::create_dir_all(out_dir)?;
    let series_path = out_dir.join("series.csv");
    let manifest_path = out_dir.join("manifest.json");

    struct Evolved {
        series: RunSeries,
        outcome: Outcome,
        snapshots: Vec<SnapshotGrids>,
        final_t: f64,
        interior_profile: Vec<(f64, f64)>,
        snapshot_profiles: Vec<SnapshotProfile>,
    }

    let persist_failure = |aborted: RunAborted, series_path: &Path| -> HarnessError {
        let _ = write_series_csv(series_path, &aborted.series);
        HarnessError::Run(aborted.error)
    };

    const PROFILE_POINTS: usize = 65;
    let window_profile = |x0: f64, x1: f64, u_at: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        (0..PROFILE_POINTS)
            .map(|k| {
                let x = x0 + (x1 - x0) * k as f64 / (PROFILE_POINTS - 1) as f64;
                (x, u_at(x))
            })
            .collect()
    };

    let evolved: Evolved = match &config.geometry {
        Geometry::Single { h0 } => {
            let initial = make_initial_state(
                *h0,
                &config.initial,
                config.grid.n,
                &config.model,
            )
            .map_err(HarnessError::Run)?;
            let stop = |series: &RunSeries| {
                classify(series, l_star, &thresholds).verdict != Verdict::Undetermined
            };
            match run(initial, &settings, Some(&stop)) {
                Ok(res) => Evolved {
                    outcome: classify(&res.series, l_star, &thresholds),
                    snapshots: res
                        .snapshots
                        .iter()
                        .map(|s| (s.t, s.u.clone(), s.v1.clone(), s.v2.clone()))
                        .collect(),
                    final_t: res.final_state.t,
                    interior_profile: window_profile(0.0, 1.0, &|x| res.final_state.u_at(x)),
                    snapshot_profiles: res
                        .snapshots
                        .iter()
                        .map(|s| (s.t, window_profile(0.0, 1.0, &|x| s.u_at(x))))
                        .collect(),
                    series: res.series,
                },
                Err(aborted) => return Err(persist_failure(aborted, &series_path)),
            }
        }
        Geometry::Double { g0, h0 } => {
            let initial = make_initial_double(
                *g0,
                *h0,
                &config.initial,
                config.grid.n,
                &config.model,
            )
            .map_err(HarnessError::Run)?;
            let stop = |series: &RunSeries| {
                classify_double(series, l_star, &thresholds).verdict != Verdict::Undetermined
            };
            match run_double(initial, &settings, Some(&stop)) {
                Ok(res) => Evolved {
                    outcome: classify_double(&res.series, l_star, &thresholds),
                    snapshots: res
                        .snapshots
                        .iter()
                        .map(|s| (s.t, s.u.clone(), s.v1.clone(), s.v2.clone()))
                        .collect(),
                    final_t: res.final_state.t,
                    interior_profile: window_profile(-1.0, 1.0, &|x| res.final_state.u_at(x)),
                    snapshot_profiles: res
                        .snapshots
                        .iter()
                        .map(|s| (s.t, window_profile(-1.0, 1.0, &|x| s.u_at(x))))
                        .collect(),
                    series: res.series,
                },
                Err(aborted) => return Err(persist_failure(aborted, &series_path)),
            }
        }
        Geometry::Halfline { length } => {
            let initial = make_initial_halfline(
                *length,
                &config.initial,
                config.grid.n,
                &config.model,
            )
            .map_err(HarnessError::Run)?;
            match run_halfline(initial, &settings, None) {
                Ok(res) => {
                    let last = res.series.last().copied();
                    Evolved {
                        outcome: Outcome {
                            verdict: Verdict::Undetermined,
                            h_infinity_estimate: *length,
                            final_sup_u: last.map_or(f64::NAN, |s| s.sup_u),
                            l_star,
                        },
                        snapshots: res
                            .snapshots
                            .iter()
                            .map(|s| (s.t, s.u.clone(), s.v1.clone(), s.v2.clone()))
                            .collect(),
                        final_t: res.final_state.t,
                        interior_profile: window_profile(0.0, 0.9 * length, &|x| {
                            res.final_state.u_at(x)
                        }),
                        snapshot_profiles: res
                            .snapshots
                            .iter()
                            .map(|s| (s.t, window_profile(0.0, 0.9 * length, &|x| s.u_at(x))))
                            .collect(),
                        series: res.series,
                    }
                }
                Err(aborted) => return Err(persist_failure(aborted, &series_path)),
            }
        }
        Geometry::FixedMixed { length, beta } => {
            let u0 = config.initial.sample_grid(config.grid.n);
            match run_fixed_mixed(beta.as_ref(), &field, *length, u0, &settings) {
                Ok((series, state)) => {
                    let last = series.last().copied();
                    Evolved {
                        outcome: Outcome {
                            verdict: Verdict::Undetermined,
                            h_infinity_estimate: *length,
                            final_sup_u: last.map_or(f64::NAN, |s| s.sup_u),
                            l_star,
                        },
                        snapshots: Vec::new(),
                        final_t: state.t,
                        interior_profile: window_profile(0.0, *length, &|x| state.u_at(x)),
                        snapshot_profiles: Vec::new(),
                        series,
                    }
                }
                Err(aborted) => return Err(persist_failure(aborted, &series_path)),
            }
        }
        Geometry::FixedDirichlet {
            left,
            right,
            a0,
            b0,
            beta,
        } => {
            let u0 = config.initial.sample_grid(config.grid.n);
            match run_fixed_dirichlet(beta.as_ref(), *a0, *b0, *left, *right, u0, &settings) {
                Ok((series, state)) => {
                    let last = series.last().copied();
                    Evolved {
                        outcome: Outcome {
                            verdict: Verdict::Undetermined,
                            h_infinity_estimate: right - left,
                            final_sup_u: last.map_or(f64::NAN, |s| s.sup_u),
                            l_star,
                        },
                        snapshots: Vec::new(),
                        final_t: state.t,
                        interior_profile: window_profile(*left, *right, &|x| state.u_at(x)),
                        snapshot_profiles: Vec::new(),
                        series,
                    }
                }
                Err(aborted) => return Err(persist_failure(aborted, &series_path)),
            }
        }
    };

    write_series_csv(&series_path, &evolved.series)?;
    let mut snapshot_paths = Vec::new();
    for (t, u, v1, v2) in &evolved.snapshots {
        let p = out_dir.join(format!("snapshot_t{t:.6}.csv"));
        write_snapshot_csv(&p, u, v1, v2)?;
        snapshot_paths.push(p);
    }

    #[derive(Serialize)]
    struct Manifest<'a> {
        config_digest: &'a str,
        grid_n: usize,
        l_star: f64,
        outcome: &'a Outcome,
        hypotheses: &'a HypothesisReport,
        final_t: f64,
        series: &'a str,
    }
    write_json(
        &manifest_path,
        &Manifest {
            config_digest: &digest,
            grid_n: config.grid.n,
            l_star,
            outcome: &evolved.outcome,
            hypotheses: &hypotheses,
            final_t: evolved.final_t,
            series: "series.csv",
        },
    )?;

    Ok(RunArtifacts {
        digest,
        grid_n: config.grid.n,
        l_star,
        outcome: evolved.outcome,
        hypotheses,
        series_path,
        manifest_path,
        snapshot_paths,
        final_t: evolved.final_t,
        interior_profile: evolved.interior_profile,
        snapshot_profiles: evolved.snapshot_profiles,
    })
}

/// The `spectrum` subcommand record.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub l_star: f64,
    pub l_star_star: f64,
    pub grid_n: usize,
    pub horizon: f64,
}

/// Compute the spectrum record for a config: the exponent interval on the
/// config's initial domain plus both critical lengths of its coefficients.
pub fn spectrum_record(config: &RunConfig) -> Result<SpectrumRecord, HarnessError> {
    use crate::spectrum::{exponent_interval, BoundaryKind, ExponentOptions};
    let field = config.validate()?;
    let bc = match config.geometry {
        Geometry::Single { h0 } => BoundaryKind::MixedNeumannDirichlet { length: h0 },
        Geometry::Double { g0, h0 } => BoundaryKind::DirichletDirichlet { left: g0, right: h0 },
        Geometry::Halfline { length } | Geometry::FixedMixed { length, .. } => {
            BoundaryKind::MixedNeumannDirichlet { length }
        }
        Geometry::FixedDirichlet { left, right, .. } => {
            BoundaryKind::DirichletDirichlet { left, right }
        }
    };
    let mut opts = ExponentOptions::for_field(&field);
    opts.grid_n = config.grid.n.max(64);
    let interval = exponent_interval(&field, &bc, &opts)?;
    Ok(SpectrumRecord {
        lambda_min: interval.lambda_min,
        lambda_max: interval.lambda_max,
        l_star: critical_length_single(&field, 1e-4)?,
        l_star_star: critical_length_double(&field, 1e-4)?,
        grid_n: opts.grid_n,
        horizon: interval.horizon_used,
    })
}
