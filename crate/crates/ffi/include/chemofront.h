#ifndef CHEMOFRONT_H
#define CHEMOFRONT_H

/* Generated by cbindgen from chemofront-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
enum cf_status
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  CF_STATUS_OK = 0,
  CF_STATUS_INVALID_ARGUMENT = 1,
  CF_STATUS_CONFIG_ERROR = 2,
  CF_STATUS_RUN_ERROR = 3,
  CF_STATUS_NULL_POINTER = 4,
  CF_STATUS_INTERNAL = 5,
};
#ifndef __cplusplus
typedef int32_t cf_status;
#endif // __cplusplus

/**
 * Run verdicts as stable integers.
 */
enum cf_verdict
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  CF_VERDICT_SPREADING = 0,
  CF_VERDICT_VANISHING = 1,
  CF_VERDICT_UNDETERMINED = 2,
};
#ifndef __cplusplus
typedef int32_t cf_verdict;
#endif // __cplusplus

/**
 * Opaque handle to a finished run: outcome, manifest, and series text.
 */
typedef struct cf_run_result cf_run_result;

/**
 * Chemotaxis and Stefan constants; field-for-field the core model
 * parameters.
 */
typedef struct cf_model_params {
  double chi1;
  double chi2;
  double lambda1;
  double lambda2;
  double mu1;
  double mu2;
  double nu;
} cf_model_params;

/**
 * Hypothesis margins and derived constants for one configuration.
 */
typedef struct cf_hypothesis_report {
  double combo;
  double combo_abs;
  /**
   * NaN when the weak damping hypothesis fails.
   */
  double ceiling;
  /**
   * NaN when the weak damping hypothesis fails.
   */
  double floor;
  double margin_global;
  double margin_persistence;
  double margin_uniqueness;
  bool global_existence;
  bool persistence;
  bool uniqueness;
} cf_hypothesis_report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message into `buf` (NUL-terminated, truncated to
 * `len`). Safe to call after any failing function on the same thread.
 *
 * # Safety
 * `buf` must point to at least `len` writable bytes.
 */
void cf_last_error(char *buf, size_t len);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a chemofront-ffi call and not freed
 * before.
 */
void cf_string_free(char *s);

/**
 * Combination and two-sided coefficients dominating the potential terms.
 */
cf_status cf_model_constants(const struct cf_model_params *params,
                             double *combo,
                             double *combo_abs);

/**
 * Evaluate the standing damping hypotheses for constant coefficient bounds.
 */
cf_status cf_hypotheses_check(const struct cf_model_params *params,
                              double a_inf,
                              double a_sup,
                              double b_inf,
                              double b_sup,
                              struct cf_hypothesis_report *out);

/**
 * Principal eigenvalue of d²/dx² + a0 with zero flux at 0 and an absorbing
 * end at `length`.
 */
cf_status cf_principal_eigenvalue_mixed(double a0, double length, size_t grid_n, double *out);

/**
 * Principal eigenvalue of d²/dx² + a0 with absorbing ends at `left` and
 * `right`.
 */
cf_status cf_principal_eigenvalue_dirichlet(double a0,
                                            double left,
                                            double right,
                                            size_t grid_n,
                                            double *out);

/**
 * Critical single-front length for constant growth a0.
 */
cf_status cf_critical_length_single(double a0, double tol, double *out);

/**
 * Critical double-front width for constant growth a0.
 */
cf_status cf_critical_length_double(double a0, double tol, double *out);

/**
 * Execute one run described by TOML text. `out_dir` may be null, in which
 * case outputs land in a temporary directory owned by the handle.
 */
cf_status cf_run_toml(const char *config_toml,
                      const char *out_dir,
                      bool allow_h1_violation,
                      struct cf_run_result **out);

/**
 * Verdict of a finished run.
 */
cf_status cf_run_result_verdict(const struct cf_run_result *handle, cf_verdict *out);

/**
 * Front-limit estimate (infinite for spreading runs).
 */
cf_status cf_run_result_h_infinity(const struct cf_run_result *handle, double *out);

/**
 * Final sup-norm of the density.
 */
cf_status cf_run_result_final_sup(const struct cf_run_result *handle, double *out);

/**
 * Critical length used by the run's classifier.
 */
cf_status cf_run_result_l_star(const struct cf_run_result *handle, double *out);

/**
 * Full time-series CSV of the run; free with [`cf_string_free`].
 */
cf_status cf_run_result_series_csv(const struct cf_run_result *handle, char **out);

/**
 * Run manifest JSON (digest, grid, verdict); free with [`cf_string_free`].
 */
cf_status cf_run_result_manifest_json(const struct cf_run_result *handle, char **out);

/**
 * Release a run handle.
 *
 * # Safety
 * `handle` must come from [`cf_run_toml`] and not be freed twice.
 */
void cf_run_result_free(struct cf_run_result *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHEMOFRONT_H */
