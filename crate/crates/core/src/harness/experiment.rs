//! Named experiment presets: each builds its configs, runs them, checks its
//! assertions, and writes per-run outputs plus a summary JSON.

use crate::coeff::{CoefficientKind, Sampler};
use crate::fixeddomain::logistic_entire_solution;
use crate::frontsolver::{DtPolicy, Verdict};
use crate::harness::config::{
    apply_overrides, AutoOrValue, CoefficientsSection, Geometry, GridConfig, OutputSection,
    RunConfig, SweepAxis, SweepConfig, SweepSection, TimeConfig,
};
use crate::harness::output::write_json;
use crate::harness::runner::{execute_run, spectrum_record, HarnessError, RunArtifacts};
use crate::harness::sweep::run_sweep;
use crate::model::ModelParams;
use crate::profile::Profile;
use serde::Serialize;
use std::path::Path;

pub const PRESETS: &[&str] = &[
    "bounds-check",
    "dichotomy-sweep",
    "persistence",
    "ode-limit",
    "double-dichotomy",
    "spectrum-report",
];

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub preset: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.0.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    fn le(&mut self, name: &str, value: f64, limit: f64) {
        self.push(
            name,
            value <= limit,
            format!("{value:.6e} <= {limit:.6e}"),
        );
    }

    fn verdict(&mut self, name: &str, got: Verdict, want: Verdict) {
        self.push(name, got == want, format!("{got:?} (expected {want:?})"));
    }
}

fn base_config(model: ModelParams, coefficients: CoefficientsSection) -> RunConfig {
    RunConfig {
        model,
        coefficients,
        geometry: Geometry::Single { h0: 1.0 },
        initial: Profile::CosHalf { amplitude: 0.5 },
        grid: GridConfig { n: 128 },
        time: TimeConfig {
            dt: DtPolicy::default(),
            t_end: 40.0,
        },
        run: Default::default(),
        classify: Default::default(),
        output: OutputSection::default(),
    }
}

fn plain_model() -> ModelParams {
    ModelParams::no_chemotaxis(1.0)
}

fn small_chemo_model() -> ModelParams {
    ModelParams {
        chi1: 0.1,
        chi2: 0.1,
        lambda1: 1.0,
        lambda2: 1.0,
        mu1: 1.0,
        mu2: 1.0,
        nu: 1.0,
    }
}

/// Deviation of the final interior profile from a constant target, relative
/// to the target.
fn profile_relative_deviation(profile: &[(f64, f64)], target: f64) -> f64 {
    profile
        .iter()
        .map(|(_, u)| (u - target).abs() / target)
        .fold(0.0, f64::max)
}

fn run_one(
    config: RunConfig,
    overrides: &[String],
    out_dir: &Path,
    allow_h1: bool,
) -> Result<RunArtifacts, HarnessError> {
    let config = apply_overrides(config, overrides)?;
    execute_run(&config, out_dir, allow_h1)
}

pub fn run_experiment(
    preset: &str,
    overrides: &[String],
    out_dir: &Path,
    jobs: usize,
    allow_h1: bool,
) -> Result<ExperimentReport, HarnessError> {
    let mut checks = Checks::new();
    match preset {
        "bounds-check" => bounds_check(&mut checks, overrides, out_dir, allow_h1)?,
        "dichotomy-sweep" => dichotomy_sweep(&mut checks, overrides, out_dir, jobs, allow_h1)?,
        "persistence" => persistence(&mut checks, overrides, out_dir, allow_h1)?,
        "ode-limit" => ode_limit(&mut checks, overrides, out_dir, allow_h1)?,
        "double-dichotomy" => double_dichotomy(&mut checks, overrides, out_dir, allow_h1)?,
        "spectrum-report" => spectrum_report(&mut checks, overrides, out_dir)?,
        other => {
            return Err(HarnessError::Config(crate::error::ConfigError::Validation(
                format!("unknown preset `{other}`; known: {}", PRESETS.join(", ")),
            )))
        }
    }
    let passed = checks.0.iter().all(|c| c.passed);
    let report = ExperimentReport {
        preset: preset.to_string(),
        checks: checks.0,
        passed,
    };
    write_json(&out_dir.join("summary.json"), &report)?;
    Ok(report)
}

/// Density ceiling and monotone-decay checks: start above the ceiling and
/// watch the sup norm come down, with every per-step invariant enforced.
fn bounds_check(
    checks: &mut Checks,
    overrides: &[String],
    out_dir: &Path,
    allow_h1: bool,
) -> Result<(), HarnessError> {
    // Ceiling is a_sup / b_inf = 1; start at sup 2.
    let mut cfg = base_config(plain_model(), CoefficientsSection::constant(1.0, 1.0));
    cfg.geometry = Geometry::Single { h0: 1.5 };
    cfg.initial = Profile::CosHalf { amplitude: 2.0 };
    cfg.time.t_end = 8.0;
    cfg.run.h_max = AutoOrValue::Value(100.0);
    let art = run_one(cfg, overrides, &out_dir.join("above-ceiling"), allow_h1)?;
    let ceiling = art.hypotheses.ceiling.unwrap_or(f64::NAN);

    // While the sup norm sits above the ceiling it must be nonincreasing.
    let samples = {
        let text = std::fs::read_to_string(&art.series_path)?;
        parse_series_sup(&text)?
    };
    let mut monotone = true;
    let mut worst = 0.0f64;
    for w in samples.windows(2) {
        if w[0] > ceiling + 1e-3 && w[1] > ceiling + 1e-3 && w[1] > w[0] + 1e-9 {
            monotone = false;
            worst = worst.max(w[1] - w[0]);
        }
    }
    checks.push(
        "sup nonincreasing above ceiling",
        monotone,
        format!("worst increase {worst:.3e}"),
    );
    let tail_start = samples.len() - samples.len() / 10 - 1;
    let tail_max = samples[tail_start..].iter().fold(0.0f64, |s, &x| s.max(x));
    checks.le("eventual bound: tail sup <= ceiling + 0.02", tail_max, ceiling + 0.02);

    // A chemotactic run under the damping hypothesis: completing at all means
    // positivity, the ceiling, front monotonicity, and both potential bounds
    // held at every step.
    let model = ModelParams {
        chi1: 0.3,
        chi2: 0.2,
        lambda1: 1.2,
        lambda2: 0.8,
        mu1: 1.0,
        mu2: 1.0,
        nu: 1.0,
    };
    let mut cfg = base_config(model, CoefficientsSection::constant(1.0, 1.0));
    cfg.geometry = Geometry::Single { h0: 2.0 };
    cfg.initial = Profile::CosHalf { amplitude: 0.8 };
    cfg.time.t_end = 6.0;
    cfg.run.h_max = AutoOrValue::Value(100.0);
    let art = run_one(cfg, overrides, &out_dir.join("chemo-invariants"), allow_h1)?;
    checks.push(
        "chemotactic run keeps every step invariant",
        true,
        format!("final sup_u {:.4}", art.outcome.final_sup_u),
    );
    Ok(())
}

fn parse_series_sup(text: &str) -> Result<Vec<f64>, HarnessError> {
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        let col = line.split(',').nth(3).ok_or_else(|| {
            HarnessError::Assertion("series.csv missing sup_u column".into())
        })?;
        out.push(col.parse::<f64>().map_err(|e| {
            HarnessError::Assertion(format!("series.csv parse: {e}"))
        })?);
    }
    Ok(out)
}

/// The two calibration runs on either side of the critical length, plus a
/// front-position sweep checking the verdict boundary is monotone.
fn dichotomy_sweep(
    checks: &mut Checks,
    overrides: &[String],
    out_dir: &Path,
    jobs: usize,
    allow_h1: bool,
) -> Result<(), HarnessError> {
    // The front creeps at roughly a third of a unit per time once spreading
    // locks in, so the cap must be reachable inside the horizon.
    let mk = |h0: f64, amp: f64, t_end: f64| {
        let mut cfg = base_config(plain_model(), CoefficientsSection::constant(1.0, 1.0));
        cfg.geometry = Geometry::Single { h0 };
        cfg.initial = Profile::CosHalf { amplitude: amp };
        cfg.time.t_end = t_end;
        cfg.run.h_max = AutoOrValue::Value(15.0);
        cfg
    };

    let vanish = run_one(mk(0.4, 0.1, 60.0), overrides, &out_dir.join("calib-vanishing"), allow_h1)?;
    checks.verdict("calibration run below l* vanishes", vanish.outcome.verdict, Verdict::Vanishing);
    checks.le(
        "vanishing front limit <= l* + 0.05",
        vanish.outcome.h_infinity_estimate,
        vanish.l_star + 0.05,
    );

    let spread = run_one(mk(2.0, 0.5, 60.0), overrides, &out_dir.join("calib-spreading"), allow_h1)?;
    checks.verdict("calibration run above l* spreads", spread.outcome.verdict, Verdict::Spreading);
    checks.le(
        "spreading interior within 1% of a/b on [0,1]",
        profile_relative_deviation(&spread.interior_profile, 1.0),
        0.01,
    );

    // Sweep the initial front position across the critical length.
    let base = mk(1.0, 0.3, 60.0);
    let values: Vec<toml::Value> = (0..10)
        .map(|k| toml::Value::Float(0.3 + 0.3 * k as f64))
        .collect();
    let sweep = SweepConfig {
        base,
        sweep: SweepSection {
            axes: vec![SweepAxis {
                path: "geometry.h0".into(),
                values,
            }],
            jobs: None,
        },
    };
    let summary = run_sweep(&sweep, &out_dir.join("h0-sweep"), jobs, allow_h1)?;
    let verdicts: Vec<(f64, Verdict)> = summary
        .cells
        .iter()
        .map(|c| {
            let h0 = c.values[0].as_float().unwrap_or(f64::NAN);
            (h0, c.verdict.unwrap_or(Verdict::Undetermined))
        })
        .collect();
    let max_spreading_below_vanishing = verdicts.iter().any(|&(h0_v, v)| {
        v == Verdict::Vanishing
            && verdicts
                .iter()
                .any(|&(h0_s, s)| s == Verdict::Spreading && h0_s < h0_v)
    });
    checks.push(
        "verdict boundary monotone in h0",
        !max_spreading_below_vanishing,
        format!("{verdicts:?}"),
    );
    let l_star = summary
        .cells
        .iter()
        .find_map(|c| c.l_star)
        .unwrap_or(f64::NAN);
    let vanishing_above_l_star = verdicts
        .iter()
        .any(|&(h0, v)| v == Verdict::Vanishing && h0 > l_star + 1e-6);
    checks.push(
        "no vanishing verdict above l*",
        !vanishing_above_l_star,
        format!("l* = {l_star:.4}"),
    );
    Ok(())
}

/// Interior persistence band for a strict-damping half-line configuration.
fn persistence(
    checks: &mut Checks,
    overrides: &[String],
    out_dir: &Path,
    allow_h1: bool,
) -> Result<(), HarnessError> {
    let model = ModelParams {
        chi1: 0.1,
        chi2: 0.2,
        lambda1: 1.0,
        lambda2: 1.0,
        mu1: 1.0,
        mu2: 1.0,
        nu: 1.0,
    };
    let mut cfg = base_config(model, CoefficientsSection::constant(1.0, 1.0));
    cfg.geometry = Geometry::Halfline { length: 40.0 };
    cfg.initial = Profile::Constant { value: 0.5 };
    cfg.grid.n = 512;
    cfg.time.t_end = 30.0;
    let art = run_one(cfg, overrides, &out_dir.join("halfline"), allow_h1)?;

    checks.push(
        "strict damping hypothesis holds",
        art.hypotheses.persistence,
        format!("margin {:.4}", art.hypotheses.margin_persistence),
    );
    let floor = art.hypotheses.floor.unwrap_or(f64::NAN);
    let ceiling = art.hypotheses.ceiling.unwrap_or(f64::NAN);

    let text = std::fs::read_to_string(&art.series_path)?;
    let mut inside = true;
    let mut worst_low = f64::INFINITY;
    let mut worst_high = f64::NEG_INFINITY;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let t: f64 = cols[0].parse().unwrap_or(f64::NAN);
        let sup: f64 = cols[3].parse().unwrap_or(f64::NAN);
        let inf: f64 = cols[4].parse().unwrap_or(f64::NAN);
        if t >= 15.0 {
            worst_low = worst_low.min(inf);
            worst_high = worst_high.max(sup);
            if inf < floor - 0.02 || sup > ceiling + 1.0 + 0.02 {
                inside = false;
            }
        }
    }
    checks.push(
        "interior density inside the persistence band after transient",
        inside,
        format!(
            "observed [{worst_low:.4}, {worst_high:.4}] vs [{:.4}, {:.4}]",
            floor - 0.02,
            ceiling + 1.02
        ),
    );
    Ok(())
}

/// Spreading interiors converge to the spatially-flat logistic orbit.
fn ode_limit(
    checks: &mut Checks,
    overrides: &[String],
    out_dir: &Path,
    allow_h1: bool,
) -> Result<(), HarnessError> {
    // Constant coefficients: the orbit is a/b = 2.
    let mut cfg = base_config(small_chemo_model(), CoefficientsSection::constant(2.0, 1.0));
    cfg.geometry = Geometry::Single { h0: 2.0 };
    cfg.initial = Profile::CosHalf { amplitude: 0.5 };
    cfg.time.t_end = 25.0;
    cfg.run.h_max = AutoOrValue::Value(1e6);
    let art = run_one(cfg, overrides, &out_dir.join("constant"), allow_h1)?;
    checks.le(
        "constant coefficients: interior within 1% of a/b",
        profile_relative_deviation(&art.interior_profile, 2.0),
        0.01,
    );

    // Periodic growth: compare the final-period interior against the
    // periodic logistic orbit.
    let a = Sampler::SinPeriodic {
        offset: 1.0,
        amplitude: 0.5,
        period: 1.0,
    };
    let b = Sampler::Constant { value: 1.0 };
    let coefficients = CoefficientsSection {
        kind: CoefficientKind::TimeOnly,
        a0: None,
        b0: None,
        a: Some(a.clone()),
        b: Some(b.clone()),
        period: 1.0,
        a_inf: Some(0.5),
        a_sup: Some(1.5),
        b_inf: Some(1.0),
        b_sup: Some(1.0),
        x_window: (0.0, 50.0),
    };
    let mut cfg = base_config(small_chemo_model(), coefficients);
    cfg.geometry = Geometry::Single { h0: 2.0 };
    cfg.initial = Profile::CosHalf { amplitude: 0.5 };
    cfg.time.t_end = 24.0;
    // First-order time stepping lags the oscillating orbit by O(dt); keep
    // the step well under the orbit period.
    cfg.time.dt = DtPolicy::Auto {
        cfl: 0.5,
        max: 0.01,
    };
    cfg.run.h_max = AutoOrValue::Value(1e6);
    cfg.run.snapshot_times = (0..=16).map(|k| 23.0 + k as f64 / 16.0).collect();
    let art = run_one(cfg, overrides, &out_dir.join("periodic"), allow_h1)?;

    let orbit = logistic_entire_solution(&a, &b, 1.0).map_err(HarnessError::Run)?;
    let scale = orbit.max();
    let mut worst = 0.0f64;
    for (t, profile) in &art.snapshot_profiles {
        let target = orbit.eval(*t);
        for (_, u) in profile {
            worst = worst.max((u - target).abs() / scale);
        }
    }
    checks.push(
        "periodic growth: final-period orbit within 2% of the logistic orbit",
        !art.snapshot_profiles.is_empty() && worst <= 0.02,
        format!("sup distance {worst:.4} over {} snapshots", art.snapshot_profiles.len()),
    );
    Ok(())
}

/// Double-front symmetry and the width dichotomy.
fn double_dichotomy(
    checks: &mut Checks,
    overrides: &[String],
    out_dir: &Path,
    allow_h1: bool,
) -> Result<(), HarnessError> {
    let mk = |half_width: f64, amp: f64| {
        let mut cfg = base_config(plain_model(), CoefficientsSection::constant(1.0, 1.0));
        cfg.geometry = Geometry::Double {
            g0: -half_width,
            h0: half_width,
        };
        cfg.initial = Profile::SinPi { amplitude: amp };
        cfg.time.t_end = 40.0;
        cfg.run.h_max = AutoOrValue::Value(15.0);
        cfg
    };

    // Width 4 > critical width: spreading, and the run doubles as the
    // symmetry check.
    let art = run_one(mk(2.0, 0.5), overrides, &out_dir.join("wide"), allow_h1)?;
    let text = std::fs::read_to_string(&art.series_path)?;
    let mut worst_asym = 0.0f64;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let h: f64 = cols[1].parse().unwrap_or(f64::NAN);
        let g: f64 = cols[7].parse().unwrap_or(f64::NAN);
        worst_asym = worst_asym.max((g + h).abs());
    }
    checks.le("symmetric data keeps |g| = h (1e-8)", worst_asym, 1e-8);
    checks.verdict("width 4 spreads", art.outcome.verdict, Verdict::Spreading);
    checks.le(
        "spreading interior within 1% of a/b on [-1,1]",
        profile_relative_deviation(&art.interior_profile, 1.0),
        0.01,
    );

    let art = run_one(mk(0.6, 0.2), overrides, &out_dir.join("narrow"), allow_h1)?;
    checks.verdict("width 1.2 vanishes", art.outcome.verdict, Verdict::Vanishing);
    checks.le(
        "vanishing width limit <= l** + 0.05",
        art.outcome.h_infinity_estimate,
        art.l_star + 0.05,
    );
    Ok(())
}

/// Exponent interval and critical lengths for the configured coefficients.
fn spectrum_report(
    checks: &mut Checks,
    overrides: &[String],
    out_dir: &Path,
) -> Result<(), HarnessError> {
    let mut cfg = base_config(plain_model(), CoefficientsSection::constant(1.0, 1.0));
    cfg.geometry = Geometry::Single { h0: 1.0 };
    let cfg = apply_overrides(cfg, overrides)?;
    let record = spectrum_record(&cfg)?;
    write_json(&out_dir.join("spectrum.json"), &record)?;

    checks.push(
        "exponent interval is ordered",
        record.lambda_min <= record.lambda_max,
        format!("[{}, {}]", record.lambda_min, record.lambda_max),
    );
    checks.push(
        "critical width within [l*, 2 l*]",
        record.l_star_star >= record.l_star - 1e-6
            && record.l_star_star <= 2.0 * record.l_star + 1e-3,
        format!("l* = {}, l** = {}", record.l_star, record.l_star_star),
    );
    let field = cfg.validate()?;
    let lam = crate::spectrum::critical_length_single(&field, 1e-4).and_then(|l| {
        crate::spectrum::principal_eigenvalue(
            &|_| field.a_time_mean(0.0),
            &crate::spectrum::BoundaryKind::MixedNeumannDirichlet { length: l },
            512,
        )
    })?;
    checks.le("exponent at l* is near zero", lam.abs(), 5e-3);
    Ok(())
}
