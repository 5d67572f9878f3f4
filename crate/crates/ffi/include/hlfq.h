#ifndef HLFQ_H
#define HLFQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HlfqStatus {
  HLFQ_STATUS_OK = 0,
  HLFQ_STATUS_NULL_POINTER = 1,
  HLFQ_STATUS_INVALID_ARGUMENT = 2,
  HLFQ_STATUS_PARSE = 3,
  HLFQ_STATUS_INVALID_TUPLE = 4,
  HLFQ_STATUS_BUDGET = 5,
  HLFQ_STATUS_FIELD_MISMATCH = 6,
  HLFQ_STATUS_OVERFLOW = 7,
  HLFQ_STATUS_INTERNAL = 8,
} HlfqStatus;

/**
 * A finite field F_q.
 */
typedef struct HlfqField HlfqField;

/**
 * A polynomial over an [`HlfqField`].
 */
typedef struct HlfqPoly HlfqPoly;

/**
 * A validated tuple: field, degree and offsets.
 */
typedef struct HlfqTuple HlfqTuple;

/**
 * Outcome of an exact or sampled count.
 */
typedef struct HlfqCount {
  /**
   * 1 when `exact_count` holds an enumerated count, 0 for an estimate.
   */
  int32_t is_exact;
  uint64_t exact_count;
  double estimate;
  /**
   * `q^n / n^r` as a double.
   */
  double prediction;
  double abs_error;
  double normalized_error;
  /**
   * 0 for exact counts.
   */
  uint64_t sample_size;
  double ci_half_width;
} HlfqCount;

/**
 * Discriminant-density tallies.
 */
typedef struct HlfqCrReport {
  uint64_t admissible;
  uint64_t space;
  double density;
  uint64_t not_squarefree;
  uint64_t not_coprime;
  uint64_t constant;
} HlfqCrReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread; empty when none.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *hlfq_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void hlfq_string_free(char *s);

/**
 * F_{p^k}.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HlfqStatus hlfq_field_new(uint64_t p, uint32_t k, struct HlfqField **out);

/**
 * Field from a label such as `"7"` or `"3^2"`.
 *
 * # Safety
 * `label` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum HlfqStatus hlfq_field_parse(const char *label, struct HlfqField **out);

/**
 * # Safety
 * `f` must come from this library and not be freed twice.
 */
void hlfq_field_free(struct HlfqField *f);

/**
 * Order q, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint32_t hlfq_field_order(const struct HlfqField *f);

/**
 * Quadratic character of the element with the given code: -1, 0 or 1.
 *
 * # Safety
 * `f` must be a live handle; `out` must be valid for writes.
 */
enum HlfqStatus hlfq_field_quadratic_character(const struct HlfqField *f,
                                               uint32_t code,
                                               int8_t *out);

/**
 * Parses polynomial text over `f`.
 *
 * # Safety
 * `f` must be a live handle, `s` NUL-terminated, `out` valid for writes.
 */
enum HlfqStatus hlfq_poly_parse(const struct HlfqField *f, const char *s, struct HlfqPoly **out);

/**
 * # Safety
 * `p` must come from this library and not be freed twice.
 */
void hlfq_poly_free(struct HlfqPoly *p);

/**
 * Canonical text; release with [`hlfq_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_poly_format(const struct HlfqPoly *p, char **out);

/**
 * Degree, or -1 for the zero polynomial.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_poly_degree(const struct HlfqPoly *p, int64_t *out);

/**
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_poly_is_irreducible(const struct HlfqPoly *p, bool *out);

/**
 * Discriminant as an element code.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_poly_discriminant(const struct HlfqPoly *p, uint32_t *out);

/**
 * Number of monic irreducible polynomials of degree `n` over F_q.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HlfqStatus hlfq_irreducible_count(uint64_t q, uint32_t n, uint64_t *out);

/**
 * Builds and validates a tuple from `r` offsets over `f`.
 *
 * # Safety
 * `f` must be a live handle, `offsets` must point to `r` live polynomial
 * handles, `out` valid for writes.
 */
enum HlfqStatus hlfq_tuple_new(const struct HlfqField *f,
                               uint32_t n,
                               const struct HlfqPoly *const *offsets,
                               size_t r,
                               bool allow_even_q,
                               struct HlfqTuple **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice.
 */
void hlfq_tuple_free(struct HlfqTuple *t);

/**
 * Exact count over shard `shard_index` of `shard_total` (use 0 of 1 for all).
 *
 * # Safety
 * `t` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_pi_exact(const struct HlfqTuple *t,
                              uint64_t shard_index,
                              uint64_t shard_total,
                              uint64_t budget,
                              struct HlfqCount *out);

/**
 * Sampled estimate from `samples` draws under `seed`.
 *
 * # Safety
 * `t` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_pi_sample(const struct HlfqTuple *t,
                               uint64_t samples,
                               uint64_t seed,
                               struct HlfqCount *out);

/**
 * Discriminant-density count over all `(u_1, …, u_{n-1})`.
 *
 * # Safety
 * `t` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_cr_count(const struct HlfqTuple *t, uint64_t budget, struct HlfqCrReport *out);

/**
 * JSON record of an exact count; release with [`hlfq_string_free`].
 *
 * # Safety
 * `t` must be a live handle; `out` valid for writes.
 */
enum HlfqStatus hlfq_pi_exact_json(const struct HlfqTuple *t, uint64_t budget, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HLFQ_H */
