#ifndef HEISDYN_H
#define HEISDYN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which group [`heis_words_new`] counts words in.
 */
typedef enum HeisGroup {
  HEIS_GROUP_HEISENBERG = 0,
  HEIS_GROUP_Z2 = 1,
  HEIS_GROUP_FREE2 = 2,
} HeisGroup;

/**
 * Result codes shared by every entry point.
 */
typedef enum HeisStatus {
  HEIS_STATUS_OK = 0,
  HEIS_STATUS_NULL_POINTER = 1,
  HEIS_STATUS_INVALID_UTF8 = 2,
  HEIS_STATUS_PARSE = 3,
  HEIS_STATUS_INVALID_INPUT = 4,
  HEIS_STATUS_OVERFLOW = 5,
  HEIS_STATUS_NOT_LOPSIDED = 6,
  HEIS_STATUS_NON_CONVERGENCE = 7,
  HEIS_STATUS_IO = 8,
  HEIS_STATUS_OUT_OF_RANGE = 9,
  HEIS_STATUS_PANIC = 10,
} HeisStatus;

/**
 * Opaque element of the integral group ring.
 */
typedef struct HeisElement HeisElement;

/**
 * Opaque table of word counts `r(0..=n_max)`.
 */
typedef struct HeisWordTable HeisWordTable;

/**
 * Entropy value with its error bound.
 */
typedef struct HeisEstimate {
  double value;
  double error_bound;
  /**
   * Nonzero when `error_bound` is an estimate rather than a proven bound.
   */
  int heuristic;
} HeisEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *heis_last_error(void);

/**
 * Library version as a static string.
 */
const char *heis_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void heis_string_free(char *s);

/**
 * Parses an expression in `x, y, z` such as `"y^2-x*y-1"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum HeisStatus heis_element_parse(const char *text, struct HeisElement **out);

/**
 * The monomial `c · x^k y^l z^m`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HeisStatus heis_element_monomial(int64_t k,
                                      int64_t l,
                                      int64_t m,
                                      int64_t c,
                                      struct HeisElement **out);

/**
 * Releases an element. NULL is ignored.
 *
 * # Safety
 * `e` must come from this library and not have been freed.
 */
void heis_element_free(struct HeisElement *e);

/**
 * # Safety
 * Handles must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_add(const struct HeisElement *a,
                                 const struct HeisElement *b,
                                 struct HeisElement **out);

/**
 * Product `a·b` in normal form.
 *
 * # Safety
 * Handles must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_mul(const struct HeisElement *a,
                                 const struct HeisElement *b,
                                 struct HeisElement **out);

/**
 * `f*`, the involution sending each group element to its inverse.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_star(const struct HeisElement *f, struct HeisElement **out);

/**
 * Nonzero if `a == b`.
 *
 * # Safety
 * Handles must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_equal(const struct HeisElement *a,
                                   const struct HeisElement *b,
                                   int *out);

/**
 * Number of nonzero terms.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_len(const struct HeisElement *f, size_t *out);

/**
 * Coefficient of `x^k y^l z^m`; `HEIS_STATUS_OUT_OF_RANGE` if it does not fit in `int64_t`.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_coeff(const struct HeisElement *f,
                                   int64_t k,
                                   int64_t l,
                                   int64_t m,
                                   int64_t *out);

/**
 * Normal form as text, e.g. `"x*y*z"`. Free with [`heis_string_free`].
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_element_to_string(const struct HeisElement *f, char **out);

/**
 * Nonzero if one coefficient outweighs all others combined.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_is_lopsided(const struct HeisElement *f, int *out);

/**
 * Trace-series entropy of a lopsided element, with tail below `tol`.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_entropy_trace(const struct HeisElement *f,
                                   double tol,
                                   struct HeisEstimate *out);

/**
 * Periodic-determinant entropy over the primes `qs[0..n_q]`.
 *
 * # Safety
 * `f` must be valid; `qs` must point to `n_q` values; `out` must be writable.
 */
enum HeisStatus heis_entropy_periodic(const struct HeisElement *f,
                                      const size_t *qs,
                                      size_t n_q,
                                      size_t grid,
                                      struct HeisEstimate *out);

/**
 * Linear-formula entropy for elements linear in `x` or `y`.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_entropy_linear(const struct HeisElement *f,
                                    size_t grid,
                                    struct HeisEstimate *out);

/**
 * Lyapunov-exponent entropy over `zetas` Kronecker points.
 *
 * # Safety
 * `f` must be valid; `out` must be writable.
 */
enum HeisStatus heis_entropy_lyapunov(const struct HeisElement *f,
                                      size_t zetas,
                                      size_t steps,
                                      size_t samples,
                                      uint64_t seed,
                                      struct HeisEstimate *out);

/**
 * Counts of identity words of length `0..=n_max`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HeisStatus heis_words_new(enum HeisGroup group, size_t n_max, struct HeisWordTable **out);

/**
 * `r(n)` in decimal. Free with [`heis_string_free`].
 *
 * # Safety
 * `t` must be valid; `out` must be writable.
 */
enum HeisStatus heis_words_count(const struct HeisWordTable *t, size_t n, char **out);

/**
 * Releases a word table. NULL is ignored.
 *
 * # Safety
 * `t` must come from this library and not have been freed.
 */
void heis_words_free(struct HeisWordTable *t);

/**
 * Runs the command-line interface on `argv[0..argc]` (without the program
 * name) and returns its JSON report in `json_out` and exit code in `exit_code`.
 * Command failures are reported inside the JSON with exit code 1, not as a
 * failing status.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; out-pointers must be writable.
 */
enum HeisStatus heis_cli_run(size_t argc, const char *const *argv, char **json_out, int *exit_code);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HEISDYN_H */
