//! C ABI for `cone-gap`.
//!
//! Matrices, certificates and eigen-triples are opaque handles created by the
//! library and released with the matching `*_free` function. Complex data is
//! passed as interleaved `re, im` doubles. Every fallible call returns a
//! [`CgStatus`]; the message of the last failure on the calling thread is
//! available from [`cg_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cone_gap::certify::{self, CertificateClass, ComplexMatrix, ContractionCertificate};
use cone_gap::{cone, core2x2, spectral, variational, Complex, ComplexVector, EigenTriple, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    Dimension = 4,
    NotStrict = 5,
    NoConvergence = 6,
    NotAvailable = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgClass {
    Fail = 0,
    Closed = 1,
    Strict = 2,
}

/// Opaque complex matrix.
pub struct CgMatrix(ComplexMatrix);

/// Opaque contraction certificate.
pub struct CgCertificate(ContractionCertificate);

/// Opaque leading eigen-triple.
pub struct CgEigen(EigenTriple);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CgStatus {
    match e {
        Error::Input(_) | Error::NonFinite(_) => CgStatus::InvalidInput,
        Error::Domain(_) => CgStatus::Domain,
        Error::Dimension(_) | Error::Index(_) => CgStatus::Dimension,
        Error::NotStrict(_) => CgStatus::NotStrict,
        Error::NoConvergence(_) => CgStatus::NoConvergence,
    }
}

struct Fail(CgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

fn null(what: &str) -> Fail {
    Fail(CgStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> FfiResult) -> CgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside cone-gap");
            CgStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> FfiResult {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn complex_slice(data: *const f64, len: usize, what: &str) -> Result<Vec<Complex>, Fail> {
    if data.is_null() {
        return Err(null(what));
    }
    let raw = std::slice::from_raw_parts(data, 2 * len);
    Ok(raw
        .chunks_exact(2)
        .map(|p| Complex::new(p[0], p[1]))
        .collect())
}

unsafe fn vector(data: *const f64, len: usize, what: &str) -> Result<ComplexVector, Fail> {
    Ok(ComplexVector::new(complex_slice(data, len, what)?)?)
}

unsafe fn write_vector(v: &ComplexVector, out: *mut f64, len: usize) -> FfiResult {
    if out.is_null() {
        return Err(null("out"));
    }
    if len != v.len() {
        return Err(Fail(
            CgStatus::Dimension,
            format!("buffer holds {len} entries, need {}", v.len()),
        ));
    }
    let dst = std::slice::from_raw_parts_mut(out, 2 * len);
    for (k, z) in v.entries().iter().enumerate() {
        dst[2 * k] = z.re;
        dst[2 * k + 1] = z.im;
    }
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `η₁(θ)`; 1 for `θ ≥ 1`.
#[no_mangle]
pub extern "C" fn cg_eta1(theta: f64) -> f64 {
    core2x2::eta1(theta)
}

/// Creates a `rows × cols` matrix from `2·rows·cols` interleaved doubles in
/// row-major order.
///
/// # Safety
/// `data` must point to `2·rows·cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut CgMatrix,
) -> CgStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Fail(CgStatus::Dimension, "rows·cols overflows".into()))?;
        let entries = complex_slice(data, len, "data")?;
        let m = ComplexMatrix::new(rows, cols, entries)?;
        write_out(out, Box::into_raw(Box::new(CgMatrix(m))), "out")
    })
}

/// # Safety
/// `m` must be null or a handle from [`cg_matrix_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_free(m: *mut CgMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Exhaustive contraction certificate.
///
/// # Safety
/// `m` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_certify(
    m: *const CgMatrix,
    tol: f64,
    out: *mut *mut CgCertificate,
) -> CgStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let c = certify::certify_matrix(&m.0, tol)?;
        write_out(out, Box::into_raw(Box::new(CgCertificate(c))), "out")
    })
}

/// # Safety
/// `c` must be null or a handle from [`cg_certify`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_free(c: *mut CgCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live certificate handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_class(
    c: *const CgCertificate,
    out: *mut CgClass,
) -> CgStatus {
    guard(|| {
        let class = match borrow(c, "certificate")?.0.class {
            CertificateClass::Fail => CgClass::Fail,
            CertificateClass::Closed => CgClass::Closed,
            CertificateClass::Strict => CgClass::Strict,
        };
        write_out(out, class, "out")
    })
}

unsafe fn optional(
    c: *const CgCertificate,
    out: *mut f64,
    get: fn(&ContractionCertificate) -> Option<f64>,
    what: &str,
) -> CgStatus {
    guard(|| {
        let v = get(&borrow(c, "certificate")?.0)
            .ok_or_else(|| Fail(CgStatus::NotAvailable, format!("{what} is not available")))?;
        write_out(out, v, "out")
    })
}

/// `θ`; `NOT_AVAILABLE` when some block has a nonpositive denominator.
///
/// # Safety
/// `c` must be a live certificate handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_theta(c: *const CgCertificate, out: *mut f64) -> CgStatus {
    optional(c, out, |c| c.theta, "theta")
}

/// `η₁(θ)`; `NOT_AVAILABLE` unless the certificate is strict.
///
/// # Safety
/// `c` must be a live certificate handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_eta_simple(
    c: *const CgCertificate,
    out: *mut f64,
) -> CgStatus {
    optional(c, out, |c| c.eta_simple, "eta_simple")
}

/// Refined rate; `NOT_AVAILABLE` unless the certificate is strict.
///
/// # Safety
/// `c` must be a live certificate handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_eta_refined(
    c: *const CgCertificate,
    out: *mut f64,
) -> CgStatus {
    optional(c, out, |c| c.eta_refined, "eta_refined")
}

/// Writes the suprema of Δ₁, Δ₂, Δ₃, Δ₄ (possibly `+∞`).
///
/// # Safety
/// `c` must be a live certificate handle; `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_deltas(c: *const CgCertificate, out: *mut f64) -> CgStatus {
    guard(|| {
        let d = borrow(c, "certificate")?.0.delta_sup;
        if out.is_null() {
            return Err(null("out"));
        }
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[d.d1, d.d2, d.d3, d.d4]);
        Ok(())
    })
}

/// Writes the witness block indices `i, j, p, q` (0-based).
///
/// # Safety
/// `c` must be a live certificate handle; `out` must point to 4 writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn cg_certificate_witness(
    c: *const CgCertificate,
    out: *mut usize,
) -> CgStatus {
    guard(|| {
        let w = borrow(c, "certificate")?
            .0
            .witness
            .ok_or_else(|| Fail(CgStatus::NotAvailable, "no witness".into()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[w.i, w.j, w.p, w.q]);
        Ok(())
    })
}

/// Certified power iteration. Returns `NO_CONVERGENCE` (and no handle) when
/// `max_iter` is exhausted.
///
/// # Safety
/// `m` and `c` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_power_eigen(
    m: *const CgMatrix,
    c: *const CgCertificate,
    tol: f64,
    max_iter: usize,
    out: *mut *mut CgEigen,
) -> CgStatus {
    guard(|| {
        let (m, c) = (borrow(m, "matrix")?, borrow(c, "certificate")?);
        let t = spectral::power_eigen(&m.0, &c.0, tol, max_iter)?;
        if !t.converged {
            return Err(Fail(
                CgStatus::NoConvergence,
                format!("no convergence in {max_iter} steps"),
            ));
        }
        write_out(out, Box::into_raw(Box::new(CgEigen(t))), "out")
    })
}

/// # Safety
/// `e` must be null or a handle from [`cg_power_eigen`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_eigen_free(e: *mut CgEigen) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` must be a live eigen handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_eigen_lambda(
    e: *const CgEigen,
    re: *mut f64,
    im: *mut f64,
) -> CgStatus {
    guard(|| {
        let l = borrow(e, "eigen")?.0.lambda;
        write_out(re, l.re, "re")?;
        write_out(im, l.im, "im")
    })
}

/// Dimension of the eigenvectors.
///
/// # Safety
/// `e` must be a live eigen handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_eigen_dim(e: *const CgEigen, out: *mut usize) -> CgStatus {
    guard(|| write_out(out, borrow(e, "eigen")?.0.h.len(), "out"))
}

/// Right eigenvector `h` (`h₁ = 1`), interleaved.
///
/// # Safety
/// `e` must be a live eigen handle; `out` must point to `2·len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_eigen_h(e: *const CgEigen, out: *mut f64, len: usize) -> CgStatus {
    guard(|| write_vector(&borrow(e, "eigen")?.0.h, out, len))
}

/// Dual vector `ν` (`⟨ν, h⟩ = 1`), interleaved.
///
/// # Safety
/// `e` must be a live eigen handle; `out` must point to `2·len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_eigen_nu(e: *const CgEigen, out: *mut f64, len: usize) -> CgStatus {
    guard(|| write_vector(&borrow(e, "eigen")?.0.nu, out, len))
}

/// A-posteriori bound on the projective distance to the true eigenvector.
///
/// # Safety
/// `e` must be a live eigen handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_eigen_metric_error(e: *const CgEigen, out: *mut f64) -> CgStatus {
    guard(|| write_out(out, borrow(e, "eigen")?.0.metric_error, "out"))
}

/// Observed gap `r_sp(A − λP) / |λ|`.
///
/// # Safety
/// `m` and `e` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_observed_gap(
    m: *const CgMatrix,
    e: *const CgEigen,
    iters: usize,
    seed: u64,
    out: *mut f64,
) -> CgStatus {
    guard(|| {
        let g =
            spectral::observed_gap(&borrow(m, "matrix")?.0, &borrow(e, "eigen")?.0, iters, seed)?;
        write_out(out, g, "out")
    })
}

/// Projective distance between two cone vectors of length `n`.
///
/// # Safety
/// `x` and `y` must point to `2·n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_distance(
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut f64,
) -> CgStatus {
    guard(|| {
        let d = cone::distance(&vector(x, n, "x")?, &vector(y, n, "y")?)?;
        write_out(out, d.distance, "out")
    })
}

/// Variational bounds on `|λ₁|` at the test vector `x`.
///
/// # Safety
/// `m` must be a live matrix handle; `x` must point to `2·n` readable
/// doubles; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_bounds_at(
    m: *const CgMatrix,
    x: *const f64,
    n: usize,
    lower: *mut f64,
    upper: *mut f64,
) -> CgStatus {
    guard(|| {
        let b = variational::bounds_at(&borrow(m, "matrix")?.0, &vector(x, n, "x")?)?;
        write_out(lower, b.lower, "lower")?;
        write_out(upper, b.upper, "upper")
    })
}
