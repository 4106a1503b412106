//! File outputs: series and snapshot CSVs, JSON manifests.
//!
//! CSV files carry a header row, '.' decimal separator, and LF line endings;
//! floats use Rust's shortest round-trip formatting so identical runs produce
//! bit-identical files.

use crate::frontsolver::RunSeries;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

pub fn write_series_csv(path: &Path, series: &RunSeries) -> io::Result<()> {
    let mut out = String::new();
    out.push_str("t,h,h_prime,sup_u,inf_u_window,combo_residual,gradient_residual");
    if series.double_front {
        out.push_str(",g,g_prime");
    }
    out.push('\n');
    for s in &series.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            s.t, s.h, s.h_prime, s.sup_u, s.inf_u_window, s.combo_residual, s.gradient_residual
        ));
        if series.double_front {
            out.push_str(&format!(",{},{}", s.g, s.g_prime));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Snapshot of grid values: y plus the density and both potentials.
pub fn write_snapshot_csv(
    path: &Path,
    u: &[f64],
    v1: &[f64],
    v2: &[f64],
) -> io::Result<()> {
    let n = u.len() - 1;
    let mut out = String::from("y,u,v1,v2\n");
    for (i, ui) in u.iter().enumerate() {
        let y = i as f64 / n as f64;
        let v1i = v1.get(i).copied().unwrap_or(0.0);
        let v2i = v2.get(i).copied().unwrap_or(0.0);
        out.push_str(&format!("{},{},{},{}\n", y, ui, v1i, v2i));
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}
