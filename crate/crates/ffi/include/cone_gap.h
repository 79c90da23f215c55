#ifndef CONE_GAP_H
#define CONE_GAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_INPUT = 2,
  CG_STATUS_DOMAIN = 3,
  CG_STATUS_DIMENSION = 4,
  CG_STATUS_NOT_STRICT = 5,
  CG_STATUS_NO_CONVERGENCE = 6,
  CG_STATUS_NOT_AVAILABLE = 7,
  CG_STATUS_PANIC = 8,
} CgStatus;

typedef enum CgClass {
  CG_CLASS_FAIL = 0,
  CG_CLASS_CLOSED = 1,
  CG_CLASS_STRICT = 2,
} CgClass;

// Opaque contraction certificate.
typedef struct CgCertificate CgCertificate;

// Opaque leading eigen-triple.
typedef struct CgEigen CgEigen;

// Opaque complex matrix.
typedef struct CgMatrix CgMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *cg_last_error(void);

// Library version as a static NUL-terminated string.
const char *cg_version(void);

// `η₁(θ)`; 1 for `θ ≥ 1`.
double cg_eta1(double theta);

// Creates a `rows × cols` matrix from `2·rows·cols` interleaved doubles in
// row-major order.
//
// # Safety
// `data` must point to `2·rows·cols` readable doubles; `out` must be writable.
enum CgStatus cg_matrix_new(size_t rows, size_t cols, const double *data, struct CgMatrix **out);

// # Safety
// `m` must be null or a handle from [`cg_matrix_new`] not yet freed.
void cg_matrix_free(struct CgMatrix *m);

// Exhaustive contraction certificate.
//
// # Safety
// `m` must be a live matrix handle; `out` must be writable.
enum CgStatus cg_certify(const struct CgMatrix *m, double tol, struct CgCertificate **out);

// # Safety
// `c` must be null or a handle from [`cg_certify`] not yet freed.
void cg_certificate_free(struct CgCertificate *c);

// # Safety
// `c` must be a live certificate handle; `out` must be writable.
enum CgStatus cg_certificate_class(const struct CgCertificate *c, enum CgClass *out);

// `θ`; `NOT_AVAILABLE` when some block has a nonpositive denominator.
//
// # Safety
// `c` must be a live certificate handle; `out` must be writable.
enum CgStatus cg_certificate_theta(const struct CgCertificate *c, double *out);

// `η₁(θ)`; `NOT_AVAILABLE` unless the certificate is strict.
//
// # Safety
// `c` must be a live certificate handle; `out` must be writable.
enum CgStatus cg_certificate_eta_simple(const struct CgCertificate *c, double *out);

// Refined rate; `NOT_AVAILABLE` unless the certificate is strict.
//
// # Safety
// `c` must be a live certificate handle; `out` must be writable.
enum CgStatus cg_certificate_eta_refined(const struct CgCertificate *c, double *out);

// Writes the suprema of Δ₁, Δ₂, Δ₃, Δ₄ (possibly `+∞`).
//
// # Safety
// `c` must be a live certificate handle; `out` must point to 4 writable doubles.
enum CgStatus cg_certificate_deltas(const struct CgCertificate *c, double *out);

// Writes the witness block indices `i, j, p, q` (0-based).
//
// # Safety
// `c` must be a live certificate handle; `out` must point to 4 writable `size_t`.
enum CgStatus cg_certificate_witness(const struct CgCertificate *c, size_t *out);

// Certified power iteration. Returns `NO_CONVERGENCE` (and no handle) when
// `max_iter` is exhausted.
//
// # Safety
// `m` and `c` must be live handles; `out` must be writable.
enum CgStatus cg_power_eigen(const struct CgMatrix *m,
                             const struct CgCertificate *c,
                             double tol,
                             size_t max_iter,
                             struct CgEigen **out);

// # Safety
// `e` must be null or a handle from [`cg_power_eigen`] not yet freed.
void cg_eigen_free(struct CgEigen *e);

// # Safety
// `e` must be a live eigen handle; `re` and `im` must be writable.
enum CgStatus cg_eigen_lambda(const struct CgEigen *e, double *re, double *im);

// Dimension of the eigenvectors.
//
// # Safety
// `e` must be a live eigen handle; `out` must be writable.
enum CgStatus cg_eigen_dim(const struct CgEigen *e, size_t *out);

// Right eigenvector `h` (`h₁ = 1`), interleaved.
//
// # Safety
// `e` must be a live eigen handle; `out` must point to `2·len` writable doubles.
enum CgStatus cg_eigen_h(const struct CgEigen *e, double *out, size_t len);

// Dual vector `ν` (`⟨ν, h⟩ = 1`), interleaved.
//
// # Safety
// `e` must be a live eigen handle; `out` must point to `2·len` writable doubles.
enum CgStatus cg_eigen_nu(const struct CgEigen *e, double *out, size_t len);

// A-posteriori bound on the projective distance to the true eigenvector.
//
// # Safety
// `e` must be a live eigen handle; `out` must be writable.
enum CgStatus cg_eigen_metric_error(const struct CgEigen *e, double *out);

// Observed gap `r_sp(A − λP) / |λ|`.
//
// # Safety
// `m` and `e` must be live handles; `out` must be writable.
enum CgStatus cg_observed_gap(const struct CgMatrix *m,
                              const struct CgEigen *e,
                              size_t iters,
                              uint64_t seed,
                              double *out);

// Projective distance between two cone vectors of length `n`.
//
// # Safety
// `x` and `y` must point to `2·n` readable doubles; `out` must be writable.
enum CgStatus cg_distance(const double *x, const double *y, size_t n, double *out);

// Variational bounds on `|λ₁|` at the test vector `x`.
//
// # Safety
// `m` must be a live matrix handle; `x` must point to `2·n` readable
// doubles; `lower` and `upper` must be writable.
enum CgStatus cg_bounds_at(const struct CgMatrix *m,
                           const double *x,
                           size_t n,
                           double *lower,
                           double *upper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONE_GAP_H */
