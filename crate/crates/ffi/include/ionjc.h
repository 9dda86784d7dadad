#ifndef IONJC_H
#define IONJC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IonjcStatus {
  IONJC_STATUS_OK = 0,
  IONJC_STATUS_NULL_POINTER = 1,
  IONJC_STATUS_INVALID_UTF8 = 2,
  IONJC_STATUS_PARSE_ERROR = 3,
  IONJC_STATUS_VALIDATION_ERROR = 4,
  IONJC_STATUS_UNKNOWN_PRESET = 5,
  IONJC_STATUS_TRUNCATION_TOO_SMALL = 6,
  IONJC_STATUS_STEP_FAILURE = 7,
  IONJC_STATUS_DEGENERATE_BLOCK = 8,
  IONJC_STATUS_QUADRATURE_NOT_CONVERGED = 9,
  IONJC_STATUS_CACHE_ERROR = 10,
  IONJC_STATUS_IO_ERROR = 11,
  IONJC_STATUS_BUFFER_TOO_SMALL = 12,
  IONJC_STATUS_PANIC = 13,
} IonjcStatus;

/**
 * Opaque run configuration.
 */
typedef struct IonjcConfig IonjcConfig;

/**
 * Opaque motional density matrix.
 */
typedef struct IonjcDensityMatrix IonjcDensityMatrix;

/**
 * Opaque P-function element table.
 */
typedef struct IonjcElementTable IonjcElementTable;

/**
 * Model parameters passed by value. `arg_kappa` is fixed to zero.
 */
typedef struct IonjcModelParams {
  uint32_t k;
  double eta;
  double delta_phi;
  double delta_omega_tilde;
  double nu_tilde;
  double omega21_tilde;
} IonjcModelParams;

/**
 * Rectangular phase-space grid, row-major in `re` then `im`.
 */
typedef struct IonjcGrid {
  double re_min;
  double re_max;
  size_t n_re;
  double im_min;
  double im_max;
  size_t n_im;
} IonjcGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *ionjc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ionjc_version(void);

/**
 * Parses `key=value` config text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IonjcStatus ionjc_config_parse(const char *text, struct IonjcConfig **out);

/**
 * Loads a figure preset by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IonjcStatus ionjc_config_preset(const char *name, struct IonjcConfig **out);

/**
 * Canonical config text. Free the result with [`ionjc_string_free`].
 *
 * # Safety
 * `config` must come from this library; `out` must be a valid pointer.
 */
enum IonjcStatus ionjc_config_to_string(const struct IonjcConfig *config, char **out);

/**
 * # Safety
 * `config` must come from this library and not be used afterwards.
 */
void ionjc_config_free(struct IonjcConfig *config);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ionjc_string_free(char *s);

/**
 * Runs the config and writes its CSV and JSON files into `out_dir`.
 *
 * # Safety
 * `config` must come from this library; `out_dir` must be a NUL-terminated
 * string.
 */
enum IonjcStatus ionjc_run(const struct IonjcConfig *config, const char *out_dir);

/**
 * Sideband matrix element `|κ| f_k(n)` connecting `|1, n+k>` and `|2, n>`.
 *
 * # Safety
 * `params` and `out` must be valid pointers.
 */
enum IonjcStatus ionjc_sideband_element(const struct IonjcModelParams *params,
                                        size_t n,
                                        double *out);

/**
 * Time-ordered `σ22(τ)` with a classical pump, from `|1, α0>`.
 *
 * # Safety
 * `taus` and `out` must each hold `len` doubles; `params` must be valid.
 */
enum IonjcStatus ionjc_sigma22_time_ordered(const struct IonjcModelParams *params,
                                            double alpha0_re,
                                            double alpha0_im,
                                            double r,
                                            double tail_epsilon,
                                            double tol,
                                            const double *taus,
                                            double *out,
                                            size_t len);

/**
 * Quantized-pump `σ22(t̃)` from `|level, β0, α0>`.
 *
 * # Safety
 * `times` and `out` must each hold `len` doubles; `params` must be valid.
 */
enum IonjcStatus ionjc_sigma22_quantized(const struct IonjcModelParams *params,
                                         uint8_t level,
                                         double alpha0_re,
                                         double alpha0_im,
                                         double beta0_re,
                                         double beta0_im,
                                         double tail_epsilon,
                                         const double *times,
                                         double *out,
                                         size_t len);

/**
 * Reduced motional density matrix at `t̃` for `|level, β0, α0>`.
 *
 * # Safety
 * `params` and `out` must be valid pointers.
 */
enum IonjcStatus ionjc_rho_vib(const struct IonjcModelParams *params,
                               double t,
                               uint8_t level,
                               double alpha0_re,
                               double alpha0_im,
                               double beta0_re,
                               double beta0_im,
                               double tail_epsilon,
                               struct IonjcDensityMatrix **out);

/**
 * Side length of the density matrix.
 *
 * # Safety
 * `rho` must come from this library or be null (returns 0).
 */
size_t ionjc_rho_dim(const struct IonjcDensityMatrix *rho);

/**
 * Copies the matrix into `re` and `im`, row-major, `dim * dim` each.
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles.
 */
enum IonjcStatus ionjc_rho_copy(const struct IonjcDensityMatrix *rho,
                                double *re,
                                double *im,
                                size_t len);

/**
 * # Safety
 * `rho` must come from this library and not be used afterwards.
 */
void ionjc_rho_free(struct IonjcDensityMatrix *rho);

/**
 * Builds (or loads from `cache_dir`, when non-null) the element table for
 * density matrices of side `n_max + 1`.
 *
 * # Safety
 * `grid` and `out` must be valid; `cache_dir` is null or NUL-terminated.
 */
enum IonjcStatus ionjc_element_table_new(size_t n_max,
                                         double w,
                                         size_t quadrature_order,
                                         const struct IonjcGrid *grid,
                                         const char *cache_dir,
                                         struct IonjcElementTable **out);

/**
 * Evaluates `P_Ω` on the table's grid. `out` receives `n_re * n_im` values;
 * `certified_error` (may be null) the quadrature error bound.
 *
 * # Safety
 * Handles must come from this library; `out` must hold `len` doubles.
 */
enum IonjcStatus ionjc_element_table_apply(const struct IonjcElementTable *table,
                                           const struct IonjcDensityMatrix *rho,
                                           double *out,
                                           size_t len,
                                           double *certified_error);

/**
 * # Safety
 * `table` must come from this library and not be used afterwards.
 */
void ionjc_element_table_free(struct IonjcElementTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IONJC_H */
