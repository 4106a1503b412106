//! C ABI over the chemofront lab: opaque run handles, plain-old-data
//! parameter structs, and integer status codes.
//!
//! Conventions:
//! - Every fallible call returns a [`cf_status`]; outputs go through pointer
//!   arguments. On failure the thread-local message retrieved by
//!   [`cf_last_error`] describes what went wrong.
//! - Strings returned through `char**` are heap-allocated and must be
//!   released with [`cf_string_free`]; run handles with
//!   [`cf_run_result_free`].
//! - Status codes mirror the CLI exit codes: 2 for configuration errors,
//!   3 for run failures.

#![allow(non_camel_case_types)]
// Raw-pointer arguments are the calling convention here; every dereference
// is null-checked first and the callers are C.
#![allow(clippy::not_unsafe_ptr_arg_deref)]
// Validation rejects NaN by negating comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use chemofront::coeff::CoefficientField;
use chemofront::harness::config::RunConfig;
use chemofront::harness::runner::{execute_run, HarnessError, RunArtifacts};
use chemofront::model::{check_hypotheses, ModelParams};
use chemofront::spectrum::{
    critical_length_double, critical_length_single, principal_eigenvalue, BoundaryKind,
};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg.into());
}

/// Status codes returned by every fallible call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum cf_status {
    Ok = 0,
    InvalidArgument = 1,
    ConfigError = 2,
    RunError = 3,
    NullPointer = 4,
    Internal = 5,
}

fn status_of(err: &HarnessError) -> cf_status {
    match err.exit_code() {
        2 => cf_status::ConfigError,
        _ => cf_status::RunError,
    }
}

/// Chemotaxis and Stefan constants; field-for-field the core model
/// parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct cf_model_params {
    pub chi1: f64,
    pub chi2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub nu: f64,
}

impl cf_model_params {
    fn to_model(self) -> ModelParams {
        ModelParams {
            chi1: self.chi1,
            chi2: self.chi2,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            mu1: self.mu1,
            mu2: self.mu2,
            nu: self.nu,
        }
    }
}

/// Hypothesis margins and derived constants for one configuration.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct cf_hypothesis_report {
    pub combo: f64,
    pub combo_abs: f64,
    /// NaN when the weak damping hypothesis fails.
    pub ceiling: f64,
    /// NaN when the weak damping hypothesis fails.
    pub floor: f64,
    pub margin_global: f64,
    pub margin_persistence: f64,
    pub margin_uniqueness: f64,
    pub global_existence: bool,
    pub persistence: bool,
    pub uniqueness: bool,
}

/// Run verdicts as stable integers.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum cf_verdict {
    Spreading = 0,
    Vanishing = 1,
    Undetermined = 2,
}

/// Opaque handle to a finished run: outcome, manifest, and series text.
pub struct cf_run_result {
    artifacts: RunArtifacts,
    series_csv: String,
    manifest_json: String,
    // Keeps ephemeral output directories alive for the handle's lifetime.
    _tempdir: Option<tempfile::TempDir>,
}

/// Copy the last error message into `buf` (NUL-terminated, truncated to
/// `len`). Safe to call after any failing function on the same thread.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cf_last_error(buf: *mut c_char, len: usize) {
    if buf.is_null() || len == 0 {
        return;
    }
    let msg = LAST_ERROR.with(|slot| slot.borrow().clone());
    let bytes = msg.as_bytes();
    let n = bytes.len().min(len - 1);
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
    *buf.add(n) = 0;
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a chemofront-ffi call and not freed
/// before.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

macro_rules! out_write {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            set_error("null output pointer");
            return cf_status::NullPointer;
        }
        unsafe { *$ptr = $value };
    }};
}

fn guard<F: FnOnce() -> cf_status>(f: F) -> cf_status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            cf_status::Internal
        }
    }
}

/// Combination and two-sided coefficients dominating the potential terms.
#[no_mangle]
pub extern "C" fn cf_model_constants(
    params: *const cf_model_params,
    combo: *mut f64,
    combo_abs: *mut f64,
) -> cf_status {
    guard(|| {
        if params.is_null() {
            set_error("null params");
            return cf_status::NullPointer;
        }
        let p = unsafe { *params }.to_model();
        if let Err(e) = p.validate() {
            set_error(e.to_string());
            return cf_status::InvalidArgument;
        }
        out_write!(combo, chemofront::model::combo_coefficient(&p));
        out_write!(combo_abs, chemofront::model::combo_coefficient_abs(&p));
        cf_status::Ok
    })
}

/// Evaluate the standing damping hypotheses for constant coefficient bounds.
#[no_mangle]
pub extern "C" fn cf_hypotheses_check(
    params: *const cf_model_params,
    a_inf: f64,
    a_sup: f64,
    b_inf: f64,
    b_sup: f64,
    out: *mut cf_hypothesis_report,
) -> cf_status {
    guard(|| {
        if params.is_null() {
            set_error("null params");
            return cf_status::NullPointer;
        }
        let p = unsafe { *params }.to_model();
        if let Err(e) = p.validate() {
            set_error(e.to_string());
            return cf_status::InvalidArgument;
        }
        if !(a_inf > 0.0 && b_inf > 0.0 && a_sup >= a_inf && b_sup >= b_inf) {
            set_error("coefficient bounds must satisfy 0 < inf <= sup");
            return cf_status::InvalidArgument;
        }
        let mut field = CoefficientField::constant(a_inf, b_inf);
        field.a_sup = a_sup;
        field.b_sup = b_sup;
        let r = check_hypotheses(&p, &field);
        out_write!(
            out,
            cf_hypothesis_report {
                combo: r.combo,
                combo_abs: r.combo_abs,
                ceiling: r.ceiling.unwrap_or(f64::NAN),
                floor: r.floor.unwrap_or(f64::NAN),
                margin_global: r.margin_global,
                margin_persistence: r.margin_persistence,
                margin_uniqueness: r.margin_uniqueness,
                global_existence: r.global_existence,
                persistence: r.persistence,
                uniqueness: r.uniqueness,
            }
        );
        cf_status::Ok
    })
}

/// Principal eigenvalue of d²/dx² + a0 with zero flux at 0 and an absorbing
/// end at `length`.
#[no_mangle]
pub extern "C" fn cf_principal_eigenvalue_mixed(
    a0: f64,
    length: f64,
    grid_n: usize,
    out: *mut f64,
) -> cf_status {
    guard(|| {
        match principal_eigenvalue(
            &|_| a0,
            &BoundaryKind::MixedNeumannDirichlet { length },
            grid_n,
        ) {
            Ok(v) => {
                out_write!(out, v);
                cf_status::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                cf_status::InvalidArgument
            }
        }
    })
}

/// Principal eigenvalue of d²/dx² + a0 with absorbing ends at `left` and
/// `right`.
#[no_mangle]
pub extern "C" fn cf_principal_eigenvalue_dirichlet(
    a0: f64,
    left: f64,
    right: f64,
    grid_n: usize,
    out: *mut f64,
) -> cf_status {
    guard(|| {
        match principal_eigenvalue(
            &|_| a0,
            &BoundaryKind::DirichletDirichlet { left, right },
            grid_n,
        ) {
            Ok(v) => {
                out_write!(out, v);
                cf_status::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                cf_status::InvalidArgument
            }
        }
    })
}

/// Critical single-front length for constant growth a0.
#[no_mangle]
pub extern "C" fn cf_critical_length_single(a0: f64, tol: f64, out: *mut f64) -> cf_status {
    guard(|| {
        if !(a0 > 0.0) {
            set_error("a0 must be positive");
            return cf_status::InvalidArgument;
        }
        match critical_length_single(&CoefficientField::constant(a0, 1.0), tol) {
            Ok(v) => {
                out_write!(out, v);
                cf_status::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                cf_status::RunError
            }
        }
    })
}

/// Critical double-front width for constant growth a0.
#[no_mangle]
pub extern "C" fn cf_critical_length_double(a0: f64, tol: f64, out: *mut f64) -> cf_status {
    guard(|| {
        if !(a0 > 0.0) {
            set_error("a0 must be positive");
            return cf_status::InvalidArgument;
        }
        match critical_length_double(&CoefficientField::constant(a0, 1.0), tol) {
            Ok(v) => {
                out_write!(out, v);
                cf_status::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                cf_status::RunError
            }
        }
    })
}

/// Execute one run described by TOML text. `out_dir` may be null, in which
/// case outputs land in a temporary directory owned by the handle.
#[no_mangle]
pub extern "C" fn cf_run_toml(
    config_toml: *const c_char,
    out_dir: *const c_char,
    allow_h1_violation: bool,
    out: *mut *mut cf_run_result,
) -> cf_status {
    guard(|| {
        if config_toml.is_null() {
            set_error("null config text");
            return cf_status::NullPointer;
        }
        if out.is_null() {
            set_error("null output pointer");
            return cf_status::NullPointer;
        }
        let text = match unsafe { CStr::from_ptr(config_toml) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("config text is not valid UTF-8");
                return cf_status::InvalidArgument;
            }
        };
        let config: RunConfig = match chemofront::harness::config::parse_run_config(text) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return cf_status::ConfigError;
            }
        };
        let (dir, tempdir): (PathBuf, Option<tempfile::TempDir>) = if out_dir.is_null() {
            match tempfile::tempdir() {
                Ok(d) => (d.path().to_path_buf(), Some(d)),
                Err(e) => {
                    set_error(e.to_string());
                    return cf_status::RunError;
                }
            }
        } else {
            match unsafe { CStr::from_ptr(out_dir) }.to_str() {
                Ok(s) => (PathBuf::from(s), None),
                Err(_) => {
                    set_error("out_dir is not valid UTF-8");
                    return cf_status::InvalidArgument;
                }
            }
        };
        match execute_run(&config, &dir, allow_h1_violation) {
            Ok(artifacts) => {
                let series_csv =
                    std::fs::read_to_string(&artifacts.series_path).unwrap_or_default();
                let manifest_json =
                    std::fs::read_to_string(&artifacts.manifest_path).unwrap_or_default();
                let handle = Box::new(cf_run_result {
                    artifacts,
                    series_csv,
                    manifest_json,
                    _tempdir: tempdir,
                });
                unsafe { *out = Box::into_raw(handle) };
                cf_status::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

fn with_result<F: FnOnce(&cf_run_result) -> cf_status>(
    handle: *const cf_run_result,
    f: F,
) -> cf_status {
    if handle.is_null() {
        set_error("null run handle");
        return cf_status::NullPointer;
    }
    f(unsafe { &*handle })
}

/// Verdict of a finished run.
#[no_mangle]
pub extern "C" fn cf_run_result_verdict(
    handle: *const cf_run_result,
    out: *mut cf_verdict,
) -> cf_status {
    guard(|| {
        with_result(handle, |r| {
            use chemofront::frontsolver::Verdict;
            let v = match r.artifacts.outcome.verdict {
                Verdict::Spreading => cf_verdict::Spreading,
                Verdict::Vanishing => cf_verdict::Vanishing,
                Verdict::Undetermined => cf_verdict::Undetermined,
            };
            out_write!(out, v);
            cf_status::Ok
        })
    })
}

/// Front-limit estimate (infinite for spreading runs).
#[no_mangle]
pub extern "C" fn cf_run_result_h_infinity(
    handle: *const cf_run_result,
    out: *mut f64,
) -> cf_status {
    guard(|| {
        with_result(handle, |r| {
            out_write!(out, r.artifacts.outcome.h_infinity_estimate);
            cf_status::Ok
        })
    })
}

/// Final sup-norm of the density.
#[no_mangle]
pub extern "C" fn cf_run_result_final_sup(
    handle: *const cf_run_result,
    out: *mut f64,
) -> cf_status {
    guard(|| {
        with_result(handle, |r| {
            out_write!(out, r.artifacts.outcome.final_sup_u);
            cf_status::Ok
        })
    })
}

/// Critical length used by the run's classifier.
#[no_mangle]
pub extern "C" fn cf_run_result_l_star(
    handle: *const cf_run_result,
    out: *mut f64,
) -> cf_status {
    guard(|| {
        with_result(handle, |r| {
            out_write!(out, r.artifacts.outcome.l_star);
            cf_status::Ok
        })
    })
}

fn string_out(text: &str, out: *mut *mut c_char) -> cf_status {
    if out.is_null() {
        set_error("null output pointer");
        return cf_status::NullPointer;
    }
    match CString::new(text.replace('\0', "")) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            cf_status::Ok
        }
        Err(_) => {
            set_error("string contains interior NUL");
            cf_status::Internal
        }
    }
}

/// Full time-series CSV of the run; free with [`cf_string_free`].
#[no_mangle]
pub extern "C" fn cf_run_result_series_csv(
    handle: *const cf_run_result,
    out: *mut *mut c_char,
) -> cf_status {
    guard(|| with_result(handle, |r| string_out(&r.series_csv, out)))
}

/// Run manifest JSON (digest, grid, verdict); free with [`cf_string_free`].
#[no_mangle]
pub extern "C" fn cf_run_result_manifest_json(
    handle: *const cf_run_result,
    out: *mut *mut c_char,
) -> cf_status {
    guard(|| with_result(handle, |r| string_out(&r.manifest_json, out)))
}

/// Release a run handle.
///
/// # Safety
/// `handle` must come from [`cf_run_toml`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cf_run_result_free(handle: *mut cf_run_result) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> cf_model_params {
        cf_model_params {
            chi1: 0.0,
            chi2: 0.0,
            lambda1: 1.0,
            lambda2: 1.0,
            mu1: 1.0,
            mu2: 1.0,
            nu: 1.0,
        }
    }

    #[test]
    fn constants_roundtrip() {
        let p = params();
        let mut combo = f64::NAN;
        let mut combo_abs = f64::NAN;
        let status = cf_model_constants(&p, &mut combo, &mut combo_abs);
        assert_eq!(status, cf_status::Ok);
        assert_eq!(combo, 0.0);
        assert_eq!(combo_abs, 0.0);
    }

    #[test]
    fn hypotheses_report_roundtrip() {
        let p = params();
        let mut report = cf_hypothesis_report {
            combo: 0.0,
            combo_abs: 0.0,
            ceiling: 0.0,
            floor: 0.0,
            margin_global: 0.0,
            margin_persistence: 0.0,
            margin_uniqueness: 0.0,
            global_existence: false,
            persistence: false,
            uniqueness: false,
        };
        let status = cf_hypotheses_check(&p, 1.0, 1.0, 1.0, 1.0, &mut report);
        assert_eq!(status, cf_status::Ok);
        assert!(report.global_existence && report.persistence && report.uniqueness);
        assert!((report.ceiling - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_and_critical_lengths() {
        let mut lam = f64::NAN;
        let status = cf_principal_eigenvalue_mixed(1.0, 10.0, 256, &mut lam);
        assert_eq!(status, cf_status::Ok);
        assert!((lam - (1.0 - std::f64::consts::PI.powi(2) / 400.0)).abs() < 1e-4);

        let mut l_star = f64::NAN;
        assert_eq!(
            cf_critical_length_single(1.0, 1e-4, &mut l_star),
            cf_status::Ok
        );
        assert!((l_star - std::f64::consts::FRAC_PI_2).abs() < 1e-3);

        let mut width = f64::NAN;
        assert_eq!(
            cf_critical_length_double(1.0, 1e-4, &mut width),
            cf_status::Ok
        );
        assert!((width - std::f64::consts::PI).abs() < 1e-3);
    }

    #[test]
    fn run_from_toml_and_accessors() {
        let toml_text = r#"
[model]
chi1 = 0.0
chi2 = 0.0
lambda1 = 1.0
lambda2 = 1.0
mu1 = 1.0
mu2 = 1.0
nu = 1.0

[coefficients]
kind = "constant"
a0 = 1.0
b0 = 1.0

[geometry]
kind = "single"
h0 = 0.4

[initial]
shape = "cos_half"
amplitude = 0.1

[grid]
n = 64

[time]
t_end = 40.0
"#;
        let c_text = CString::new(toml_text).unwrap();
        let mut handle: *mut cf_run_result = std::ptr::null_mut();
        let status = cf_run_toml(c_text.as_ptr(), std::ptr::null(), false, &mut handle);
        assert_eq!(status, cf_status::Ok);
        assert!(!handle.is_null());

        let mut verdict = cf_verdict::Undetermined;
        assert_eq!(cf_run_result_verdict(handle, &mut verdict), cf_status::Ok);
        assert_eq!(verdict, cf_verdict::Vanishing);

        let mut h_inf = f64::NAN;
        assert_eq!(cf_run_result_h_infinity(handle, &mut h_inf), cf_status::Ok);
        assert!(h_inf < std::f64::consts::FRAC_PI_2 + 0.05);

        let mut csv: *mut c_char = std::ptr::null_mut();
        assert_eq!(cf_run_result_series_csv(handle, &mut csv), cf_status::Ok);
        let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_string();
        assert!(text.starts_with("t,h,h_prime"));
        unsafe { cf_string_free(csv) };

        let mut json: *mut c_char = std::ptr::null_mut();
        assert_eq!(
            cf_run_result_manifest_json(handle, &mut json),
            cf_status::Ok
        );
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
        assert!(text.contains("config_digest"));
        unsafe { cf_string_free(json) };

        unsafe { cf_run_result_free(handle) };
    }

    #[test]
    fn bad_config_reports_error() {
        let c_text = CString::new("not toml at all [").unwrap();
        let mut handle: *mut cf_run_result = std::ptr::null_mut();
        let status = cf_run_toml(c_text.as_ptr(), std::ptr::null(), false, &mut handle);
        assert_eq!(status, cf_status::ConfigError);
        assert!(handle.is_null());
        let mut buf = vec![0i8; 256];
        unsafe { cf_last_error(buf.as_mut_ptr(), buf.len()) };
        let msg = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
        assert!(!msg.is_empty());
    }

    #[test]
    fn null_pointers_are_rejected() {
        let mut lam = f64::NAN;
        assert_eq!(
            cf_principal_eigenvalue_mixed(1.0, -1.0, 64, &mut lam),
            cf_status::InvalidArgument
        );
        assert_eq!(
            cf_model_constants(std::ptr::null(), &mut lam, &mut lam),
            cf_status::NullPointer
        );
    }
}
