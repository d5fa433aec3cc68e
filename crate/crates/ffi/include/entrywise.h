#ifndef ENTRYWISE_H
#define ENTRYWISE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum {
  EW_STATUS_OK = 0,
  EW_STATUS_NULL_POINTER = 1,
  EW_STATUS_INVALID_ARGUMENT = 2,
  EW_STATUS_DOMAIN = 3,
  EW_STATUS_NOT_PSD = 4,
  EW_STATUS_RESOURCE = 5,
  EW_STATUS_CONSTRUCTION = 6,
  EW_STATUS_PARSE = 7,
  EW_STATUS_PANIC = 8,
} ew_status;

/**
 * Verdicts of [`ew_admissible`].
 */
typedef enum {
  EW_ADMISSIBILITY_INADMISSIBLE = 0,
  EW_ADMISSIBILITY_BOUNDARY = 1,
  EW_ADMISSIBILITY_ADMISSIBLE = 2,
} ew_admissibility;

/**
 * Orbit groups for [`ew_stratify`].
 */
typedef enum {
  EW_GROUP_TRIVIAL = 0,
  EW_GROUP_UNIT_CIRCLE = 1,
  EW_GROUP_NONZERO_COMPLEX = 2,
} ew_group;

/**
 * Opaque square complex matrix.
 */
typedef struct ew_matrix ew_matrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *ew_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ew_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ew_string_free(char *s);

/**
 * Builds an `n x n` matrix from row-major real and imaginary parts.
 * `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `n * n` doubles; `result`
 * must be writable.
 */
ew_status ew_matrix_new(size_t n, const double *re, const double *im, ew_matrix **result);

/**
 * Parses a matrix file (`{"n": .., "entries": [[{"re": .., "im": ..}, ..], ..]}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `result` must be writable.
 */
ew_status ew_matrix_from_json(const char *json, ew_matrix **result);

/**
 * Serializes a matrix in the matrix-file format. Free the string with
 * [`ew_string_free`].
 *
 * # Safety
 * `m` must be a live handle; `result` must be writable.
 */
ew_status ew_matrix_to_json(const ew_matrix *m, char **result);

/**
 * # Safety
 * `m` must be a live handle; `result` must be writable.
 */
ew_status ew_matrix_dim(const ew_matrix *m, size_t *result);

/**
 * Entry `(i, j)` as real and imaginary parts.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
ew_status ew_matrix_get(const ew_matrix *m, size_t i, size_t j, double *re, double *im);

/**
 * Frees a matrix handle. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not have been freed.
 */
void ew_matrix_free(ew_matrix *m);

/**
 * `C(c; z^M; N, rho)` for the `n` coefficients `c`.
 *
 * # Safety
 * `c` must point to `n` doubles; `result` must be writable.
 */
ew_status ew_threshold_constant(const double *c, size_t n, uint32_t m, double rho, double *result);

/**
 * Writes the `n` partial constants `C_1 < ... < C_N` (needs `m >= n`).
 *
 * # Safety
 * `c` must point to `n` doubles and `result` to room for `n` doubles.
 */
ew_status ew_partial_constants(const double *c, size_t n, uint32_t m, double rho, double *result);

/**
 * Classifies `h_c(z) + cprime z^M` on the disc of radius `rho`.
 *
 * # Safety
 * `c` must point to `n` doubles; `result` must be writable.
 */
ew_status ew_admissible(const double *c,
                        size_t n,
                        uint32_t m,
                        double rho,
                        double cprime,
                        ew_admissibility *result);

/**
 * Number of semistandard tableaux of hook shape `mu(M, N, j)`.
 *
 * # Safety
 * `result` must be writable.
 */
ew_status ew_hook_dimension(uint32_t m, size_t n, size_t j, uint64_t *result);

/**
 * Spectral-radius form of the generalized Rayleigh quotient of `A∘M`
 * against `h_c[A]`.
 *
 * # Safety
 * `c` must point to `n` doubles, `a` must be a live handle and `result`
 * writable.
 */
ew_status ew_rayleigh_constant(const double *c,
                               size_t n,
                               uint32_t m,
                               const ew_matrix *a,
                               double tol,
                               double *result);

/**
 * Closed form of the quotient at `A = u u^*`; `u_im` may be null.
 *
 * # Safety
 * `c` must point to `n` doubles, `u_re` (and `u_im` when non-null) to `n`
 * doubles; `result` must be writable.
 */
ew_status ew_rayleigh_rank_one(const double *c,
                               size_t n,
                               uint32_t m,
                               const double *u_re,
                               const double *u_im,
                               double *result);

/**
 * Orbit block decomposition under `group` (an [`EwGroup`] value):
 * `labels[i]` is the block of index `i` (blocks numbered by their smallest
 * member), `blocks` their count.
 *
 * # Safety
 * `a` must be a live handle, `labels` must have room for `dim(a)` entries
 * and `blocks` must be writable.
 */
ew_status ew_stratify(const ew_matrix *a,
                      int32_t group,
                      double tol,
                      size_t *labels,
                      size_t *blocks);

/**
 * Dimension of the common kernel of all Hadamard powers of `A`.
 *
 * # Safety
 * `a` must be a live handle; `result` must be writable.
 */
ew_status ew_simultaneous_kernel_dim(const ew_matrix *a, double tol, size_t *result);

/**
 * Writes 1 if `A` is Hermitian PSD within `tol`, else 0.
 *
 * # Safety
 * `a` must be a live handle; `result` must be writable.
 */
ew_status ew_psd_check(const ew_matrix *a, double tol, int32_t *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTRYWISE_H */
