#ifndef TORICQ_H
#define TORICQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TqStatus {
  TQ_STATUS_OK = 0,
  TQ_STATUS_NULL_POINTER = 1,
  TQ_STATUS_INVALID_UTF8 = 2,
  TQ_STATUS_PARSE = 3,
  TQ_STATUS_DOMAIN = 4,
  TQ_STATUS_PANIC = 5,
} TqStatus;

/**
 * Opaque handle to a parsed problem.
 */
typedef struct TqProblem TqProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *tq_version(void);

/**
 * Message for the most recent failure on this thread, or an empty string.
 * Valid until the next `tq_*` call on the same thread.
 */
const char *tq_last_error_message(void);

/**
 * Parses a TOML problem.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TqStatus tq_problem_parse(const char *toml, struct TqProblem **out);

/**
 * Releases a problem. Null is ignored.
 *
 * # Safety
 * `problem` must come from [`tq_problem_parse`] and not be used afterwards.
 */
void tq_problem_free(struct TqProblem *problem);

/**
 * Torus rank, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t tq_problem_rank(const struct TqProblem *problem);

/**
 * Number of weights, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t tq_problem_weight_count(const struct TqProblem *problem);

/**
 * Whether the support given by 1-based weight indices is semistable.
 *
 * # Safety
 * `problem` must be a live handle, `indices` must point to `len` values
 * (or be null when `len` is 0), and `out` must be writable.
 */
enum TqStatus tq_is_ss_support(const struct TqProblem *problem,
                               const size_t *indices,
                               size_t len,
                               bool *out);

/**
 * Quotient report as compact JSON.
 *
 * # Safety
 * `problem` must be a live handle and `out` writable.
 */
enum TqStatus tq_quotient_report_json(const struct TqProblem *problem, char **out);

/**
 * Inertia sectors as a JSON array; `order_cap` 0 selects the default cap.
 *
 * # Safety
 * `problem` must be a live handle and `out` writable.
 */
enum TqStatus tq_inertia_sectors_json(const struct TqProblem *problem,
                                      uint64_t order_cap,
                                      char **out);

/**
 * Affine gauged-map report for a degree such as `"1/3"` or `"1,0"`. A null
 * `degree` uses the degree from the problem file.
 *
 * # Safety
 * `problem` must be a live handle, `degree` null or NUL-terminated, and
 * `out` writable.
 */
enum TqStatus tq_affine_report_json(const struct TqProblem *problem,
                                    const char *degree,
                                    char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from a `tq_*` out-pointer and not be freed twice.
 */
void tq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORICQ_H */
