//! Parameter sweeps: the cartesian product of axis values, run in parallel,
//! aggregated into a deterministic phase-table CSV.

use crate::harness::config::SweepConfig;
use crate::harness::runner::{execute_run, HarnessError};
use crate::frontsolver::Verdict;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One sweep cell result; failures are recorded, not fatal.
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub index: usize,
    pub values: Vec<toml::Value>,
    pub digest: String,
    pub verdict: Option<Verdict>,
    pub h_infinity: Option<f64>,
    pub final_sup_u: Option<f64>,
    pub l_star: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub digest: String,
    pub cells: Vec<CellResult>,
    pub summary_csv: PathBuf,
}

/// Execute every cell with the given parallelism; cell outputs land in
/// `out_dir/cells/cell_NNNN/`, the phase table in `out_dir/summary.csv`.
/// Output ordering is by cell index, so reruns of the same sweep digest are
/// bit-identical.
pub fn run_sweep(
    sweep: &SweepConfig,
    out_dir: &Path,
    jobs: usize,
    allow_h1_violation: bool,
) -> Result<SweepSummary, HarnessError> {
    sweep.validate()?;
    let count = sweep.cell_count();
    let digest = sweep.base.digest();
    std::fs::create_dir_all(out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Assertion(format!("thread pool: {e}")))?;

    let cells: Vec<CellResult> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|idx| {
                let cell_dir = out_dir.join("cells").join(format!("cell_{idx:04}"));
                match sweep.cell(idx) {
                    Ok((config, values)) => {
                        match execute_run(&config, &cell_dir, allow_h1_violation) {
                            Ok(artifacts) => CellResult {
                                index: idx,
                                values,
                                digest: artifacts.digest,
                                verdict: Some(artifacts.outcome.verdict),
                                h_infinity: Some(artifacts.outcome.h_infinity_estimate),
                                final_sup_u: Some(artifacts.outcome.final_sup_u),
                                l_star: Some(artifacts.l_star),
                                error: None,
                            },
                            Err(e) => CellResult {
                                index: idx,
                                values,
                                digest: config.digest(),
                                verdict: None,
                                h_infinity: None,
                                final_sup_u: None,
                                l_star: None,
                                error: Some(e.to_string()),
                            },
                        }
                    }
                    Err(e) => CellResult {
                        index: idx,
                        values: Vec::new(),
                        digest: String::new(),
                        verdict: None,
                        h_infinity: None,
                        final_sup_u: None,
                        l_star: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });

    let summary_csv = out_dir.join("summary.csv");
    write_summary_csv(&summary_csv, sweep, &cells)?;
    Ok(SweepSummary {
        digest,
        cells,
        summary_csv,
    })
}

fn toml_scalar(v: &toml::Value) -> String {
    match v {
        toml::Value::Float(x) => format!("{x}"),
        toml::Value::Integer(x) => format!("{x}"),
        toml::Value::Boolean(x) => format!("{x}"),
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_summary_csv(
    path: &Path,
    sweep: &SweepConfig,
    cells: &[CellResult],
) -> Result<(), HarnessError> {
    let mut out = String::from("cell");
    for axis in &sweep.sweep.axes {
        out.push(',');
        out.push_str(&axis.path);
    }
    out.push_str(",verdict,h_infinity,final_sup_u,l_star,error\n");
    for cell in cells {
        out.push_str(&format!("{}", cell.index));
        for v in &cell.values {
            out.push(',');
            out.push_str(&toml_scalar(v));
        }
        if cell.values.is_empty() {
            for _ in &sweep.sweep.axes {
                out.push(',');
            }
        }
        let verdict = match cell.verdict {
            Some(Verdict::Spreading) => "Spreading",
            Some(Verdict::Vanishing) => "Vanishing",
            Some(Verdict::Undetermined) => "Undetermined",
            None => "Error",
        };
        let fmt_opt = |v: Option<f64>| match v {
            Some(x) if x.is_finite() => format!("{x}"),
            Some(_) => "inf".to_string(),
            None => String::new(),
        };
        out.push_str(&format!(
            ",{},{},{},{},{}\n",
            verdict,
            fmt_opt(cell.h_infinity),
            fmt_opt(cell.final_sup_u),
            fmt_opt(cell.l_star),
            cell.error.clone().unwrap_or_default().replace(',', ";"),
        ));
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}
