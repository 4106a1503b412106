//! Command-line front end: run, sweep, spectrum, experiment,
//! validate-config.
//!
//! Exit codes: 0 success, 2 config error, 3 run failure, 4 assertion
//! failure.

use chemofront::harness::config::{load_run_config, load_sweep_config};
use chemofront::harness::experiment::{run_experiment, PRESETS};
use chemofront::harness::output::write_json;
use chemofront::harness::runner::{execute_run, spectrum_record, HarnessError};
use chemofront::harness::sweep::run_sweep;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "chemofront", about = "Free-boundary chemotaxis lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Config file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory; defaults to the config's output.out_dir.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override a config value by dotted path, e.g. geometry.h0=2.0.
    /// Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Parallel jobs for sweeps and experiments.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Run configs that violate the damping hypothesis (with a blow-up
    /// guard instead of the certified bounds).
    #[arg(long)]
    allow_h1_violation: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and classify it.
    Run {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Execute the cartesian product of sweep axes.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit the exponent interval and critical lengths for a config.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a named experiment preset.
    Experiment {
        /// One of: bounds-check, dichotomy-sweep, persistence, ode-limit,
        /// double-dichotomy, spectrum-report.
        preset: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Parse and validate a config without running it.
    ValidateConfig {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn require_config(common: &CommonArgs) -> Result<PathBuf, HarnessError> {
    common.config.clone().ok_or_else(|| {
        HarnessError::Config(chemofront::ConfigError::Validation(
            "--config <path> is required".into(),
        ))
    })
}

fn out_dir(common: &CommonArgs, from_config: Option<&str>) -> PathBuf {
    common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(from_config.unwrap_or("out")))
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { common } => {
            let path = require_config(&common)?;
            let config = load_run_config(&path, &common.overrides)?;
            let dir = out_dir(&common, Some(&config.output.out_dir));
            let artifacts = execute_run(&config, &dir, common.allow_h1_violation)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&artifacts.outcome).unwrap_or_default()
            );
            eprintln!(
                "run {} -> {:?}, series at {}",
                artifacts.digest,
                artifacts.outcome.verdict,
                artifacts.series_path.display()
            );
            Ok(())
        }
        Command::Sweep { common } => {
            let path = require_config(&common)?;
            let sweep = load_sweep_config(&path, &common.overrides)?;
            let dir = out_dir(&common, Some(&sweep.base.output.out_dir));
            let jobs = sweep.sweep.jobs.unwrap_or(common.jobs);
            let summary = run_sweep(&sweep, &dir, jobs, common.allow_h1_violation)?;
            let failed = summary.cells.iter().filter(|c| c.error.is_some()).count();
            eprintln!(
                "sweep {}: {} cells, {} failed, table at {}",
                summary.digest,
                summary.cells.len(),
                failed,
                summary.summary_csv.display()
            );
            Ok(())
        }
        Command::Spectrum { common } => {
            let path = require_config(&common)?;
            let config = load_run_config(&path, &common.overrides)?;
            let record = spectrum_record(&config)?;
            let text = serde_json::to_string_pretty(&record)
                .map_err(|e| HarnessError::Assertion(e.to_string()))?;
            println!("{text}");
            if let Some(dir) = &common.out {
                write_json(&dir.join("spectrum.json"), &record)?;
            }
            Ok(())
        }
        Command::Experiment { preset, common } => {
            let dir = common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("out").join(&preset));
            if !PRESETS.contains(&preset.as_str()) {
                return Err(HarnessError::Config(chemofront::ConfigError::Validation(
                    format!("unknown preset `{preset}`; known: {}", PRESETS.join(", ")),
                )));
            }
            let report = run_experiment(
                &preset,
                &common.overrides,
                &dir,
                common.jobs,
                common.allow_h1_violation,
            )?;
            for check in &report.checks {
                println!(
                    "{} {} ({})",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            if report.passed {
                Ok(())
            } else {
                Err(HarnessError::Assertion(format!(
                    "{} checks failed in preset {preset}",
                    report.checks.iter().filter(|c| !c.passed).count()
                )))
            }
        }
        Command::ValidateConfig { common } => {
            let path = require_config(&common)?;
            let config = load_run_config(&path, &common.overrides)?;
            config.validate()?;
            eprintln!("config ok, digest {}", config.digest());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
