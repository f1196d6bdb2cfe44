#ifndef CASIMIR_RING_H
#define CASIMIR_RING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Status codes. Values 2 to 4 match the exit codes of the command-line tool.
 */
typedef enum CrStatus {
  CR_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  CR_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the model's domain, or index out of range.
   */
  CR_STATUS_DOMAIN = 2,
  /**
   * Quadrature, differentiation or root finding failed.
   */
  CR_STATUS_NUMERICAL = 3,
  /**
   * A model assumption (such as positive total inertia) does not hold.
   */
  CR_STATUS_MODEL_VIOLATION = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  CR_STATUS_PANIC = 5,
} CrStatus;

/**
 * One normalized mode function u(σ).
 */
typedef struct CrMode CrMode;

/**
 * Mode frequencies at one model point, with their mode functions.
 */
typedef struct CrSpectrum CrSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *cr_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cr_version(void);

/**
 * Computes the spectrum up to `alpha_max`. Pass `INFINITY` as
 * `lambda_hat` for Dirichlet walls.
 *
 * # Safety
 * `out_spectrum` must be NULL or valid for writes.
 */
enum CrStatus cr_spectrum_new(double beta,
                              double lambda_hat,
                              double alpha_max,
                              struct CrSpectrum **out_spectrum);

/**
 * # Safety
 * `spectrum` must be NULL or a live handle from [`cr_spectrum_new`].
 */
void cr_spectrum_free(struct CrSpectrum *spectrum);

/**
 * Number of modes; 0 for a NULL handle.
 *
 * # Safety
 * `spectrum` must be NULL or a live handle.
 */
size_t cr_spectrum_len(const struct CrSpectrum *spectrum);

/**
 * Frequency `index` (ascending, zero-based) and whether it belongs to a
 * degenerate pair. `out_degenerate` may be NULL.
 *
 * # Safety
 * `spectrum` must be a live handle; out-pointers NULL or valid for writes.
 */
enum CrStatus cr_spectrum_get(const struct CrSpectrum *spectrum,
                              size_t index,
                              double *out_alpha,
                              bool *out_degenerate);

/**
 * Mode function `index` of the spectrum. The mode owns its data and
 * outlives the spectrum.
 *
 * # Safety
 * `spectrum` must be a live handle; `out_mode` NULL or valid for writes.
 */
enum CrStatus cr_mode_new(const struct CrSpectrum *spectrum,
                          size_t index,
                          struct CrMode **out_mode);

/**
 * # Safety
 * `mode` must be NULL or a live handle from [`cr_mode_new`].
 */
void cr_mode_free(struct CrMode *mode);

/**
 * u(σ) for σ in [0, 2π).
 *
 * # Safety
 * `mode` must be a live handle; out-pointers valid for writes.
 */
enum CrStatus cr_mode_eval(const struct CrMode *mode, double sigma, double *out_re, double *out_im);

/**
 * Frequency of the mode.
 *
 * # Safety
 * `mode` must be NULL or a live handle.
 */
double cr_mode_alpha(const struct CrMode *mode);

/**
 * ODE residual, periodicity defect and jump defect of the mode.
 *
 * # Safety
 * `mode` must be a live handle; out-pointers valid for writes.
 */
enum CrStatus cr_mode_residuals(const struct CrMode *mode,
                                double *out_ode,
                                double *out_periodicity,
                                double *out_jump);

/**
 * Co-rotating field energy in units of ħc/R. `out_error` may be NULL.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_casimir_energy(double beta,
                                double lambda_hat,
                                double tol,
                                double *out_value,
                                double *out_error);

/**
 * Co-rotating total energy E_c − Îβ²/2 in units of ħc/R.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_corotating_total_energy(double beta,
                                         double lambda_hat,
                                         double inertia_hat,
                                         double tol,
                                         double *out_value,
                                         double *out_error);

/**
 * Energy in the stationary frame, in units of ħc/R.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_stationary_energy(double beta,
                                   double lambda_hat,
                                   double inertia_hat,
                                   double tol,
                                   double *out_value,
                                   double *out_error);

/**
 * Zero-point angular momentum in units of ħ.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_ell_zp(double beta,
                        double lambda_hat,
                        double tol,
                        double *out_value,
                        double *out_error);

/**
 * Zero-point moment of inertia in units of ħR/c.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_inertia_zp(double beta,
                            double lambda_hat,
                            double tol,
                            double *out_value,
                            double *out_error);

/**
 * Supremum of |ℓ_ZP| over |β| < 1 at fixed coupling.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_ell_zp_bound(double lambda_hat, double tol, double *out_value, double *out_error);

/**
 * Light-speed limit of I_ZP, its infimum over |β| < 1.
 *
 * # Safety
 * Out-pointers must be NULL or valid for writes.
 */
enum CrStatus cr_izp_lightspeed_bound(double lambda_hat,
                                      double tol,
                                      double *out_value,
                                      double *out_error);

/**
 * Rim speed β at which the total angular momentum equals `ell_total`.
 *
 * # Safety
 * `out_beta` must be NULL or valid for writes.
 */
enum CrStatus cr_omega_of_ell(double ell_total,
                              double lambda_hat,
                              double inertia_hat,
                              double tol,
                              double *out_beta);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASIMIR_RING_H */
