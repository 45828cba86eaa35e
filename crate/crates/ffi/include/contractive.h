#ifndef CONTRACTIVE_H
#define CONTRACTIVE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Inequality tested by [`contractive_run_campaign`].
 */
typedef enum {
  CONTRACTIVE_KIND_BURBEA = 0,
  CONTRACTIVE_KIND_DUAL = 1,
  CONTRACTIVE_KIND_BERGMAN = 2,
  CONTRACTIVE_KIND_RIESZ = 3,
  CONTRACTIVE_KIND_RIESZ_GEOMETRIC = 4,
  CONTRACTIVE_KIND_MEASURE = 5,
  CONTRACTIVE_KIND_UF_MONOTONE = 6,
  CONTRACTIVE_KIND_RADIAL_MONOTONE = 7,
  CONTRACTIVE_KIND_LOG_CONVEX = 8,
} ContractiveKind;

typedef enum {
  CONTRACTIVE_STATUS_OK = 0,
  CONTRACTIVE_STATUS_NULL_POINTER = 1,
  CONTRACTIVE_STATUS_INVALID_ARGUMENT = 2,
  CONTRACTIVE_STATUS_NUMERICAL = 3,
  CONTRACTIVE_STATUS_IO = 4,
  CONTRACTIVE_STATUS_PANIC = 5,
} ContractiveStatus;

typedef struct ContractivePolynomial ContractivePolynomial;

typedef struct ContractiveReport ContractiveReport;

typedef struct ContractiveTrigPolynomial ContractiveTrigPolynomial;

/**
 * Quadrature tolerances. Pass `NULL` wherever one is accepted to use the defaults.
 */
typedef struct {
  double abs_tol;
  double rel_tol;
  size_t max_subdivisions;
} ContractiveQuadrature;

/**
 * Campaign parameters. Fields the kind does not use are ignored.
 */
typedef struct {
  ContractiveKind kind;
  double p;
  double q;
  /**
   * Riesz exponent; `INFINITY` allowed.
   */
  double r;
  double alpha;
  double beta;
  double lambda;
  size_t degree;
  size_t m;
  size_t n;
  /**
   * Sampler exponent for kinds other than Burbea; `<= 0` selects the default.
   */
  double sampler_p;
  bool real_coefficients;
  uint64_t seed;
  uint64_t trials;
  double tol;
  /**
   * Worker threads; 0 uses all available.
   */
  size_t threads;
  ContractiveQuadrature quadrature;
} ContractiveCampaign;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or `NULL`. Valid until the
 * next call into the library on the same thread.
 */
const char *contractive_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *contractive_version(void);

/**
 * Default quadrature tolerances.
 */
ContractiveQuadrature contractive_quadrature_default(void);

/**
 * Polynomial `sum (re[k] + i im[k]) z^k`, `k < len`. `im` may be `NULL` for real coefficients.
 *
 * # Safety
 * `re` and `im` (when not `NULL`) must point to `len` doubles; `out` must be writable.
 */
ContractiveStatus contractive_polynomial_new(const double *re,
                                             const double *im,
                                             size_t len,
                                             ContractivePolynomial **out);

/**
 * # Safety
 * `p` must be `NULL` or a handle from [`contractive_polynomial_new`] not yet freed.
 */
void contractive_polynomial_free(ContractivePolynomial *p);

/**
 * Number of stored coefficients.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
ContractiveStatus contractive_polynomial_len(const ContractivePolynomial *p, size_t *out);

/**
 * # Safety
 * `p` must be a live handle; `out_re` and `out_im` must be writable.
 */
ContractiveStatus contractive_polynomial_eval(const ContractivePolynomial *p,
                                              double re,
                                              double im,
                                              double *out_re,
                                              double *out_im);

/**
 * Trigonometric polynomial `sum c[k] e^{i (min_degree + k) theta}`.
 *
 * # Safety
 * As for [`contractive_polynomial_new`].
 */
ContractiveStatus contractive_trig_new(int64_t min_degree,
                                       const double *re,
                                       const double *im,
                                       size_t len,
                                       ContractiveTrigPolynomial **out);

/**
 * # Safety
 * `p` must be `NULL` or a handle from [`contractive_trig_new`] not yet freed.
 */
void contractive_trig_free(ContractiveTrigPolynomial *p);

/**
 * `c_alpha(0..=n)` into `out`, which must hold `n + 1` doubles.
 *
 * # Safety
 * `out` must point to `n + 1` writable doubles.
 */
ContractiveStatus contractive_binomial_weights(double alpha, size_t n, double *out);

/**
 * `||f||_{H^p}`.
 *
 * # Safety
 * `f` must be a live handle, `quad` `NULL` or valid, `out` writable.
 */
ContractiveStatus contractive_hardy_norm(const ContractivePolynomial *f,
                                         double p,
                                         const ContractiveQuadrature *quad,
                                         double *out);

/**
 * `||f||_{A^p_alpha}` by quadrature.
 *
 * # Safety
 * As for [`contractive_hardy_norm`].
 */
ContractiveStatus contractive_bergman_norm(const ContractivePolynomial *f,
                                           double p,
                                           double alpha,
                                           const ContractiveQuadrature *quad,
                                           double *out);

/**
 * `||f||_{A^2_alpha}` from the coefficients.
 *
 * # Safety
 * `f` must be a live handle; `out` writable.
 */
ContractiveStatus contractive_coefficient_bergman_norm(const ContractivePolynomial *f,
                                                       double alpha,
                                                       double *out);

/**
 * `||f||_{D_beta}` from the coefficients.
 *
 * # Safety
 * `f` must be a live handle; `out` writable.
 */
ContractiveStatus contractive_dirichlet_norm(const ContractivePolynomial *f,
                                             double beta,
                                             double *out);

/**
 * `||f||_{L^r}` on the circle; `r = INFINITY` gives the sup norm.
 *
 * # Safety
 * `f` must be a live handle, `quad` `NULL` or valid, `out` writable.
 */
ContractiveStatus contractive_lebesgue_norm(const ContractiveTrigPolynomial *f,
                                            double r,
                                            const ContractiveQuadrature *quad,
                                            double *out);

/**
 * Defaults for `kind`: degree 8, `M = N = 4`, 1000 trials, tolerance `1e-6`, seed 0.
 */
ContractiveCampaign contractive_campaign_default(ContractiveKind kind);

/**
 * Runs a seeded campaign. Failed trials are tallied in the report, not
 * returned as an error.
 *
 * # Safety
 * `config` must be valid; `out` writable.
 */
ContractiveStatus contractive_run_campaign(const ContractiveCampaign *config,
                                           ContractiveReport **out);

/**
 * # Safety
 * `r` must be `NULL` or a handle from [`contractive_run_campaign`] not yet freed.
 */
void contractive_report_free(ContractiveReport *r);

/**
 * Counts from a report.
 *
 * # Safety
 * `r` must be a live handle; each out-pointer must be `NULL` or writable.
 */
ContractiveStatus contractive_report_counts(const ContractiveReport *r,
                                            uint64_t *trials,
                                            uint64_t *violations,
                                            uint64_t *failed_trials);

/**
 * Smallest margin; NaN when every trial failed.
 *
 * # Safety
 * `r` must be a live handle; `out` writable.
 */
ContractiveStatus contractive_report_min_margin(const ContractiveReport *r, double *out);

/**
 * Report JSON, in the same format as the command-line tool. Release the
 * string with [`contractive_string_free`].
 *
 * # Safety
 * `r` must be a live handle; `out` writable.
 */
ContractiveStatus contractive_report_json(const ContractiveReport *r, bool no_timing, char **out);

/**
 * # Safety
 * `s` must be `NULL` or a string returned by this library, not yet freed.
 */
void contractive_string_free(char *s);

/**
 * Message for a status code as a static string.
 */
const char *contractive_status_message(ContractiveStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTRACTIVE_H */
