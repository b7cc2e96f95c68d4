#ifndef FAREY_LAURENT_H
#define FAREY_LAURENT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Map selector for [`fl_invariance_exact`].
 */
typedef enum FlMap {
  FL_MAP_GEO = 0,
  FL_MAP_ALG = 1,
} FlMap;

/**
 * Measure selector for [`fl_invariance_exact`].
 */
typedef enum FlMeasure {
  FL_MEASURE_MU_G = 0,
  FL_MEASURE_MU_G_PERTURBED = 1,
  FL_MEASURE_MU_A = 2,
  FL_MEASURE_HAAR = 3,
} FlMeasure;

/**
 * Result of every fallible call.
 */
typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_NULL_POINTER = 1,
  FL_STATUS_INVALID_UTF8 = 2,
  FL_STATUS_PARSE_ERROR = 3,
  FL_STATUS_INVALID_FIELD = 4,
  FL_STATUS_DOMAIN_ERROR = 5,
  FL_STATUS_DIVISION_BY_ZERO = 6,
  FL_STATUS_INSUFFICIENT_PRECISION = 7,
  FL_STATUS_DEPTH_EXCEEDED = 8,
  FL_STATUS_PRECONDITION_FAILED = 9,
  FL_STATUS_DEPTH_INFEASIBLE = 10,
  FL_STATUS_OTHER_ERROR = 11,
  /**
   * A Rust panic was caught at the boundary; a library bug.
   */
  FL_STATUS_PANIC = 12,
} FlStatus;

/**
 * A continued fraction expansion with its convergents.
 */
typedef struct FlCf FlCf;

/**
 * An element of F_q((1/t)): exact rational or a series known to a floor.
 */
typedef struct FlElement FlElement;

/**
 * A finite field F_q.
 */
typedef struct FlField FlField;

/**
 * The parameter h of the algebraic Farey map.
 */
typedef struct FlHParam FlHParam;

/**
 * Summary of a rate experiment.
 */
typedef struct FlRateSummary {
  double mean;
  double sd;
  double target;
  size_t used;
  size_t terminated;
  size_t dropped;
} FlRateSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *fl_last_error(void);

/**
 * Library version as a static string.
 */
const char *fl_version(void);

/**
 * Releases a string returned by the library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fl_string_free(char *s);

/**
 * Creates F_q. `modulus` lists ascending coefficients of the defining
 * polynomial for q = p^e with e > 1; pass null and 0 for prime q.
 *
 * # Safety
 * `modulus` must point to `modulus_len` values or be null.
 */
enum FlStatus fl_field_new(uint32_t q,
                           const uint32_t *modulus,
                           size_t modulus_len,
                           struct FlField **out);

/**
 * # Safety
 * `field` must come from [`fl_field_new`] and not have been freed.
 */
void fl_field_free(struct FlField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
uint32_t fl_field_q(const struct FlField *field);

/**
 * Parses an exact element such as `"(t+1)/(t^3+2)"`.
 *
 * # Safety
 * `field` must be a live handle and `s` a NUL-terminated string.
 */
enum FlStatus fl_element_rational(const struct FlField *field,
                                  const char *s,
                                  struct FlElement **out);

/**
 * Parses a series `"{q: 3, top: -1, coeffs: [1,0,2], floor: -8}"`.
 *
 * # Safety
 * `field` must be a live handle and `s` a NUL-terminated string.
 */
enum FlStatus fl_element_series(const struct FlField *field, const char *s, struct FlElement **out);

/**
 * Text form of an element; free with [`fl_string_free`].
 *
 * # Safety
 * `x` must be a live handle.
 */
enum FlStatus fl_element_to_string(const struct FlElement *x, char **out);

/**
 * # Safety
 * `x` must come from this library and not have been freed.
 */
void fl_element_free(struct FlElement *x);

/**
 * Expands `x` (with |x| < 1) into at most `max_k` partial quotients.
 *
 * # Safety
 * `x` must be a live handle.
 */
enum FlStatus fl_cf_expand(const struct FlElement *x, size_t max_k, struct FlCf **out);

/**
 * Number of partial quotients.
 *
 * # Safety
 * `cf` must be a live handle.
 */
size_t fl_cf_len(const struct FlCf *cf);

/**
 * Whether the expansion ended because the input is rational.
 *
 * # Safety
 * `cf` must be a live handle.
 */
bool fl_cf_terminated(const struct FlCf *cf);

/**
 * Partial quotient `A_k`, `1 <= k <= len`.
 *
 * # Safety
 * `cf` must be a live handle.
 */
enum FlStatus fl_cf_partial_quotient(const struct FlCf *cf, size_t k, char **out);

/**
 * Convergent `P_k` and `Q_k` as polynomial strings.
 *
 * # Safety
 * `cf` must be a live handle.
 */
enum FlStatus fl_cf_convergent(const struct FlCf *cf, size_t k, char **p_out, char **q_out);

/**
 * # Safety
 * `cf` must come from this library and not have been freed.
 */
void fl_cf_free(struct FlCf *cf);

/**
 * Exponent `e` with `|x - p/q| = q^e`; `*is_exact` is set when the
 * difference is zero (and `*exponent` is then left untouched).
 *
 * # Safety
 * `x` must be a live handle; `p`, `q` NUL-terminated polynomials.
 */
enum FlStatus fl_approximation_exponent(const struct FlElement *x,
                                        const char *p,
                                        const char *q,
                                        int64_t *exponent,
                                        bool *is_exact);

/**
 * One step of the geometric Farey map on `(x, n)`.
 *
 * # Safety
 * `x` must be a live handle.
 */
enum FlStatus fl_geo_step(const struct FlElement *x,
                          int64_t n,
                          struct FlElement **out,
                          int64_t *n_out);

/**
 * Parses h as `"series:0,c1,c2,..."` or a rational of degree -1.
 *
 * # Safety
 * `field` must be a live handle and `s` a NUL-terminated string.
 */
enum FlStatus fl_hparam_parse(const struct FlField *field, const char *s, struct FlHParam **out);

/**
 * # Safety
 * `h` must come from this library and not have been freed.
 */
void fl_hparam_free(struct FlHParam *h);

/**
 * One step of the algebraic Farey map `F_h`.
 *
 * # Safety
 * `x` and `h` must be live handles.
 */
enum FlStatus fl_alg_step(const struct FlElement *x,
                          const struct FlHParam *h,
                          struct FlElement **out);

/**
 * Runs the convergence-rate experiment for `F_h` (or the Artin map when
 * `h` is null) on `samples` Haar samples of orbit length `ell`.
 *
 * # Safety
 * `field` must be a live handle; `h` live or null.
 */
enum FlStatus fl_rate_experiment(const struct FlField *field,
                                 const struct FlHParam *h,
                                 size_t samples,
                                 size_t ell,
                                 uint64_t seed,
                                 struct FlRateSummary *out);

/**
 * Exact invariance check; the largest discrepancy is returned as the
 * fraction `num/den`. `h` is required for [`FlMap::Alg`].
 *
 * # Safety
 * `field` must be a live handle; `h` live or null.
 */
enum FlStatus fl_invariance_exact(const struct FlField *field,
                                  enum FlMap map,
                                  const struct FlHParam *h,
                                  enum FlMeasure measure,
                                  size_t depth,
                                  int64_t levels,
                                  int64_t *num,
                                  int64_t *den);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FAREY_LAURENT_H */
