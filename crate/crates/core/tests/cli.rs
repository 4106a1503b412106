//! End-to-end CLI checks: subcommands, file outputs, exit codes.

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chemofront"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn validate_config_accepts_and_reports_digest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &common::basic_config_toml(1.0, 0.5, 5.0));
    let out = bin()
        .args(["validate-config", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config ok"));
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown field.
    let cfg = write_config(
        dir.path(),
        "bad.toml",
        &common::basic_config_toml(1.0, 0.5, 5.0).replace("[grid]\nn = 64", "[grid]\nn = 64\nbogus = 1"),
    );
    let out = bin()
        .args(["validate-config", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Override path typo.
    let cfg = write_config(dir.path(), "ok.toml", &common::basic_config_toml(1.0, 0.5, 5.0));
    let out = bin()
        .args(["validate-config", "--config"])
        .arg(&cfg)
        .args(["--override", "geometry.h00=2.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unknown experiment preset.
    let out = bin().args(["experiment", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_series_manifest_and_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &common::basic_config_toml(0.4, 0.1, 40.0));
    let out_dir = dir.path().join("results");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let series = fs::read_to_string(out_dir.join("series.csv")).unwrap();
    let mut lines = series.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,h,h_prime,sup_u,inf_u_window,combo_residual,gradient_residual"
    );
    assert!(lines.count() > 3);
    assert!(!series.contains('\r'), "CSV must use LF line endings");

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outcome"]["verdict"], "Vanishing");
    assert!(manifest["config_digest"].as_str().unwrap().len() == 16);

    // Stdout carries the outcome JSON.
    let stdout: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout["verdict"], "Vanishing");
}

#[test]
fn run_with_override_changes_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &common::basic_config_toml(0.4, 0.1, 30.0));
    let out_dir = dir.path().join("results");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&out_dir)
        .args(["--override", "geometry.h0=2.0", "--override", "initial.amplitude=0.5"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout["verdict"], "Spreading");
    assert_eq!(stdout["h_infinity_estimate"], "inf");
}

#[test]
fn damping_violation_requires_flag() {
    let dir = tempfile::tempdir().unwrap();
    let text = common::basic_config_toml(0.3, 0.1, 2.0).replace("chi1 = 0.0", "chi1 = 2.0");
    let cfg = write_config(dir.path(), "uh.toml", &text);
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("--allow-h1-violation"), "{msg}");

    // Subcritical geometry decays even without the damping hypothesis.
    let out_dir = dir.path().join("res");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&out_dir)
        .arg("--allow-h1-violation")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_writes_phase_table() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{}\n[sweep]\n[[sweep.axes]]\npath = \"geometry.h0\"\nvalues = [0.4, 2.0]\n",
        common::basic_config_toml(1.0, 0.4, 30.0)
    );
    let cfg = write_config(dir.path(), "sweep.toml", &text);
    let out_dir = dir.path().join("sweep-out");
    let out = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&out_dir)
        .args(["--jobs", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("cell,geometry.h0,verdict"));
    assert!(lines[1].contains("Vanishing"));
    assert!(lines[2].contains("Spreading"));
    assert!(out_dir.join("cells/cell_0000/manifest.json").exists());
}

#[test]
fn spectrum_emits_json_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.toml", &common::basic_config_toml(1.0, 0.5, 5.0));
    let out = bin()
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "lambda_min",
        "lambda_max",
        "l_star",
        "l_star_star",
        "grid_n",
        "horizon",
    ] {
        assert!(record.get(key).is_some(), "missing key {key}");
    }
    let l_star = record["l_star"].as_f64().unwrap();
    assert!((l_star - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    let lam = record["lambda_min"].as_f64().unwrap();
    // Initial domain h0 = 1 sits below the critical length.
    assert!(lam < 0.0);
}

#[test]
fn experiment_spectrum_report_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["experiment", "spectrum-report", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "{stdout}");
    assert!(dir.path().join("summary.json").exists());
    assert!(dir.path().join("spectrum.json").exists());
}
