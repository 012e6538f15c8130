#ifndef GAUSSIAN_PERFECT_H
#define GAUSSIAN_PERFECT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GpStatus {
  GP_STATUS_OK = 0,
  GP_STATUS_NULL_POINTER = 1,
  GP_STATUS_INVALID_UTF8 = 2,
  GP_STATUS_PARSE = 3,
  GP_STATUS_ZERO = 4,
  GP_STATUS_DOMAIN = 5,
  GP_STATUS_INVALID_CONFIG = 6,
  GP_STATUS_PANIC = 7,
} GpStatus;

typedef enum GpParity {
  GP_PARITY_ALL = 0,
  GP_PARITY_ODD = 1,
  GP_PARITY_EVEN = 2,
} GpParity;

typedef enum GpKind {
  GP_KIND_NORM_PERFECT = 0,
  GP_KIND_PERFECT = 1,
  GP_KIND_BOTH = 2,
} GpKind;

/**
 * Opaque handle to an exact Gaussian integer.
 */
typedef struct GpGaussian GpGaussian;

/**
 * Counters of a completed search.
 */
typedef struct GpScanSummary {
  uint64_t bound;
  uint32_t shards;
  uint64_t scanned;
  uint64_t emitted;
  uint64_t errors;
} GpScanSummary;

/**
 * Counters of an odd-form theorem check.
 */
typedef struct GpTheoremSummary {
  uint64_t bound;
  uint64_t checked;
  uint64_t passed;
  uint64_t failed;
  uint64_t k_one_mod_four;
  uint64_t k_three_mod_four;
} GpTheoremSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a literal such as `3-4i` into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum GpStatus gp_gaussian_parse(const char *text, struct GpGaussian **out);

/**
 * Creates a handle from 64-bit components. Never returns null.
 */
struct GpGaussian *gp_gaussian_new(int64_t re, int64_t im);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `z` must come from this library and not be freed twice.
 */
void gp_gaussian_free(struct GpGaussian *z);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void gp_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *gp_last_error_message(void);

/**
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_gaussian_to_string(const struct GpGaussian *z, char **out);

/**
 * Components as 64-bit integers; `GP_STATUS_DOMAIN` if either overflows.
 *
 * # Safety
 * `z` must be a live handle; `re` and `im` must be writable.
 */
enum GpStatus gp_gaussian_components(const struct GpGaussian *z, int64_t *re, int64_t *im);

/**
 * Norm as a decimal string.
 *
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_gaussian_norm(const struct GpGaussian *z, char **out);

/**
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_gaussian_is_even(const struct GpGaussian *z, bool *out);

/**
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_gaussian_is_prime(const struct GpGaussian *z, bool *out);

/**
 * Sum of divisors as a new handle.
 *
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_sigma(const struct GpGaussian *z, struct GpGaussian **out);

/**
 * Canonical factorization in text form, e.g. `-i * (1+2i)^1 * (2+i)^1`.
 *
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_factor(const struct GpGaussian *z, char **out);

/**
 * Perfection report as a JSON object.
 *
 * # Safety
 * `z` must be a live handle; `out` must be writable.
 */
enum GpStatus gp_classify_json(const struct GpGaussian *z, char **out);

/**
 * Runs a search over `shards` concurrent shards and returns the merged
 * records as JSON lines. `summary` may be null.
 *
 * # Safety
 * `out` must be writable; `summary` must be null or writable.
 */
enum GpStatus gp_search_json(uint64_t bound,
                             enum GpParity parity,
                             enum GpKind kind,
                             uint32_t shards,
                             char **out,
                             struct GpScanSummary *summary);

/**
 * Checks the odd-form theorem for every odd norm-perfect subject up to `bound`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GpStatus gp_verify_theorem(uint64_t bound, struct GpTheoremSummary *out);

/**
 * Library version, static storage.
 */
const char *gp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSIAN_PERFECT_H */
