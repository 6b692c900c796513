#ifndef CODEKIT_H
#define CODEKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  CK_STATUS_OK = 0,
  /**
   * The check ran and the property does not hold.
   */
  CK_STATUS_VERIFY_FAILED = 1,
  /**
   * A parameter inequality of the construction is violated.
   */
  CK_STATUS_CONSTRAINT = 2,
  /**
   * Null pointer, invalid UTF-8 or wrong object kind.
   */
  CK_STATUS_INVALID_ARGUMENT = 3,
  CK_STATUS_IO = 4,
  /**
   * Malformed or inconsistent bundle.
   */
  CK_STATUS_BUNDLE = 5,
  /**
   * Deterministic check over its size limit.
   */
  CK_STATUS_INFEASIBLE = 6,
  /**
   * Enumeration budget exceeded.
   */
  CK_STATUS_BUDGET = 7,
  CK_STATUS_INTERNAL = 8,
} CkStatus;

/**
 * Opaque handle to a code bundle.
 */
typedef struct CkBundle CkBundle;

/**
 * Parameters of a transversal triple.
 */
typedef struct {
  uint64_t q;
  uint64_t n;
  uint64_t k;
  /**
   * 0 when no distance is recorded.
   */
  uint64_t d;
  /**
   * Nonzero when `d` is a certified lower bound rather than exact.
   */
  int32_t d_is_bound;
} CkParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ck_version(void);

/**
 * Message of the last failure on this thread. Valid until the next call that fails.
 */
const char *ck_last_error(void);

/**
 * Releases a bundle. Null is ignored.
 *
 * # Safety
 * `b` must be null or a handle returned by this library and not yet freed.
 */
void ck_bundle_free(CkBundle *b);

/**
 * Releases a string returned by `ck_bundle_to_json`. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void ck_string_free(char *s);

/**
 * Loads and revalidates a bundle file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
CkStatus ck_bundle_load(const char *path, CkBundle **out);

/**
 * Parses and revalidates a bundle from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
CkStatus ck_bundle_from_json(const char *json, CkBundle **out);

/**
 * # Safety
 * `b` must be a live handle and `path` a NUL-terminated string.
 */
CkStatus ck_bundle_save(const CkBundle *b, const char *path);

/**
 * Canonical JSON of a bundle; free the result with `ck_string_free`.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
CkStatus ck_bundle_to_json(const CkBundle *b, char **out);

/**
 * Reed-Solomon transversal triple `[[q−k, k, ℓ+1−k]]_q`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
CkStatus ck_build_rs(uint64_t q, uintptr_t k, uintptr_t l, CkBundle **out);

/**
 * Reed-Solomon multiplication-friendly collection, lifted to CSS members when `lift` is nonzero.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
CkStatus ck_build_mf_rs(uint64_t q,
                        uintptr_t n,
                        uintptr_t k,
                        uintptr_t m,
                        int32_t lift,
                        CkBundle **out);

/**
 * Alphabet reduction of the triple in `triple` by the 4-MF collection in `mf`.
 *
 * # Safety
 * `mf` and `triple` must be live handles and `out` a writable pointer.
 */
CkStatus ck_build_diamond(const CkBundle *mf, const CkBundle *triple, uintptr_t r, CkBundle **out);

/**
 * Parameters of the triple held by `b`.
 *
 * # Safety
 * `b` must be a live handle and `out` a writable pointer.
 */
CkStatus ck_bundle_params(const CkBundle *b, CkParams *out);

/**
 * Transversal CCZ check. Returns `Ok` on pass and `VerifyFailed` on failure.
 * `randomized = 0` selects the deterministic check.
 *
 * # Safety
 * `b` must be a live handle.
 */
CkStatus ck_verify_ccz(const CkBundle *b, int32_t randomized, uint64_t samples, uint64_t seed);

/**
 * Multiplication-friendly check, with the same conventions as `ck_verify_ccz`.
 *
 * # Safety
 * `b` must be a live handle.
 */
CkStatus ck_verify_mf(const CkBundle *b, int32_t randomized, uint64_t samples, uint64_t seed);

/**
 * `log(n/k) / log(d)`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
CkStatus ck_gamma_exponent(uint64_t n, uint64_t k, uint64_t d, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CODEKIT_H */
