//! C interface to the `entrywise` library.
//!
//! Every function returns an [`EwStatus`]; results go through out-pointers.
//! On failure the message is available from [`ew_last_error`] on the same
//! thread. Matrices cross the boundary as opaque [`EwMatrix`] handles.
//! Panics are caught and reported as `EW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entrywise::cli::matrix_file::MatrixFile;
use entrywise::matrix::CMatrix;
use entrywise::partitions::hook_dimension;
use entrywise::psd::{psd_check, rayleigh_constant, rayleigh_rank_one};
use entrywise::strata::{simultaneous_kernel, stratify, GroupTag};
use entrywise::threshold::{admissibility, partial_constants, threshold_constant, Admissibility, CoefficientTuple};
use entrywise::Error;
use num_complex::Complex64;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NotPsd = 4,
    Resource = 5,
    Construction = 6,
    Parse = 7,
    Panic = 8,
}

/// Orbit groups for [`ew_stratify`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EwGroup {
    Trivial = 0,
    UnitCircle = 1,
    NonzeroComplex = 2,
}

/// Verdicts of [`ew_admissible`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EwAdmissibility {
    Inadmissible = 0,
    Boundary = 1,
    Admissible = 2,
}

/// Opaque square complex matrix.
pub struct EwMatrix(CMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(EwStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parameter(_) => EwStatus::InvalidArgument,
            Error::Domain(_) => EwStatus::Domain,
            Error::Resource(_) => EwStatus::Resource,
            Error::NotPsd { .. } => EwStatus::NotPsd,
            Error::Construction(_) => EwStatus::Construction,
            Error::Io(_) | Error::Json(_) => EwStatus::Parse,
        };
        Fail(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(EwStatus::InvalidArgument, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EwStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            EwStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail(EwStatus::NullPointer, "null array".into()));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(EwStatus::NullPointer, "null output pointer".into()))
}

unsafe fn matrix<'a>(m: *const EwMatrix) -> Result<&'a CMatrix, Fail> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| Fail(EwStatus::NullPointer, "null matrix handle".into()))
}

unsafe fn coeffs(c: *const f64, n: usize) -> Result<CoefficientTuple, Fail> {
    Ok(CoefficientTuple::positive(slice(c, n)?.to_vec())?)
}

unsafe fn complex_vec(re: *const f64, im: *const f64, n: usize) -> Result<Vec<Complex64>, Fail> {
    let re = slice(re, n)?;
    let im = if im.is_null() { None } else { Some(slice(im, n)?) };
    Ok((0..n).map(|k| Complex64::new(re[k], im.map_or(0.0, |v| v[k]))).collect())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ew_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ew_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ew_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an `n x n` matrix from row-major real and imaginary parts.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `n * n` doubles; `result`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_matrix_new(n: usize, re: *const f64, im: *const f64, result: *mut *mut EwMatrix) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        if n == 0 {
            return Err(invalid("matrix size must be positive"));
        }
        let len = n.checked_mul(n).ok_or_else(|| invalid("matrix size overflows"))?;
        let z = complex_vec(re, im, len)?;
        if z.iter().any(|v| !v.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        *dst = Box::into_raw(Box::new(EwMatrix(CMatrix::from_fn(n, |i, j| z[i * n + j]))));
        Ok(())
    })
}

/// Parses a matrix file (`{"n": .., "entries": [[{"re": .., "im": ..}, ..], ..]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_matrix_from_json(json: *const c_char, result: *mut *mut EwMatrix) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        if json.is_null() {
            return Err(Fail(EwStatus::NullPointer, "null string".into()));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Fail(EwStatus::Parse, "string is not UTF-8".into()))?;
        let a = MatrixFile::parse(text)?.to_matrix()?;
        *dst = Box::into_raw(Box::new(EwMatrix(a)));
        Ok(())
    })
}

/// Serializes a matrix in the matrix-file format. Free the string with
/// [`ew_string_free`].
///
/// # Safety
/// `m` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_matrix_to_json(m: *const EwMatrix, result: *mut *mut c_char) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        let text = MatrixFile::from_matrix(matrix(m)?).to_json();
        *dst = CString::new(text).map_err(|_| invalid("interior NUL"))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_matrix_dim(m: *const EwMatrix, result: *mut usize) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        *dst = matrix(m)?.dim();
        Ok(())
    })
}

/// Entry `(i, j)` as real and imaginary parts.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_matrix_get(m: *const EwMatrix, i: usize, j: usize, re: *mut f64, im: *mut f64) -> EwStatus {
    guard(|| {
        let a = matrix(m)?;
        if i >= a.dim() || j >= a.dim() {
            return Err(invalid("index out of range"));
        }
        let z = a[(i, j)];
        let dst = out(re)?;
        *dst = z.re;
        let dst = out(im)?;
        *dst = z.im;
        Ok(())
    })
}

/// Frees a matrix handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ew_matrix_free(m: *mut EwMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `C(c; z^M; N, rho)` for the `n` coefficients `c`.
///
/// # Safety
/// `c` must point to `n` doubles; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_threshold_constant(c: *const f64, n: usize, m: u32, rho: f64, result: *mut f64) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        *dst = threshold_constant(&coeffs(c, n)?, m, rho)?;
        Ok(())
    })
}

/// Writes the `n` partial constants `C_1 < ... < C_N` (needs `m >= n`).
///
/// # Safety
/// `c` must point to `n` doubles and `result` to room for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ew_partial_constants(c: *const f64, n: usize, m: u32, rho: f64, result: *mut f64) -> EwStatus {
    guard(|| {
        let ks = partial_constants(&coeffs(c, n)?, m, rho)?;
        if result.is_null() {
            return Err(Fail(EwStatus::NullPointer, "null output pointer".into()));
        }
        std::slice::from_raw_parts_mut(result, ks.len()).copy_from_slice(&ks);
        Ok(())
    })
}

/// Classifies `h_c(z) + cprime z^M` on the disc of radius `rho`.
///
/// # Safety
/// `c` must point to `n` doubles; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_admissible(
    c: *const f64,
    n: usize,
    m: u32,
    rho: f64,
    cprime: f64,
    result: *mut EwAdmissibility,
) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        let t = coeffs(c, n)?.with_cprime(cprime);
        *dst = match admissibility(&t, m, rho)? {
            Admissibility::Admissible => EwAdmissibility::Admissible,
            Admissibility::Boundary => EwAdmissibility::Boundary,
            Admissibility::Inadmissible => EwAdmissibility::Inadmissible,
        };
        Ok(())
    })
}

/// Number of semistandard tableaux of hook shape `mu(M, N, j)`.
///
/// # Safety
/// `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_hook_dimension(m: u32, n: usize, j: usize, result: *mut u64) -> EwStatus {
    guard(|| {
        let d = hook_dimension(m, n, j)?;
        let dst = out(result)?;
        *dst = u64::try_from(d).map_err(|_| Fail(EwStatus::Resource, "dimension exceeds 64 bits".into()))?;
        Ok(())
    })
}

/// Spectral-radius form of the generalized Rayleigh quotient of `A∘M`
/// against `h_c[A]`.
///
/// # Safety
/// `c` must point to `n` doubles, `a` must be a live handle and `result`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ew_rayleigh_constant(
    c: *const f64,
    n: usize,
    m: u32,
    a: *const EwMatrix,
    tol: f64,
    result: *mut f64,
) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        *dst = rayleigh_constant(&coeffs(c, n)?, m, matrix(a)?, tol)?.value;
        Ok(())
    })
}

/// Closed form of the quotient at `A = u u^*`; `u_im` may be null.
///
/// # Safety
/// `c` must point to `n` doubles, `u_re` (and `u_im` when non-null) to `n`
/// doubles; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_rayleigh_rank_one(
    c: *const f64,
    n: usize,
    m: u32,
    u_re: *const f64,
    u_im: *const f64,
    result: *mut f64,
) -> EwStatus {
    guard(|| {
        let u = complex_vec(u_re, u_im, n)?;
        let dst = out(result)?;
        *dst = rayleigh_rank_one(&coeffs(c, n)?, m, &u)?;
        Ok(())
    })
}

/// Orbit block decomposition under `group` (an [`EwGroup`] value):
/// `labels[i]` is the block of index `i` (blocks numbered by their smallest
/// member), `blocks` their count.
///
/// # Safety
/// `a` must be a live handle, `labels` must have room for `dim(a)` entries
/// and `blocks` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_stratify(
    a: *const EwMatrix,
    group: i32,
    tol: f64,
    labels: *mut usize,
    blocks: *mut usize,
) -> EwStatus {
    guard(|| {
        let a = matrix(a)?;
        let g = match group {
            g if g == EwGroup::Trivial as i32 => GroupTag::Trivial,
            g if g == EwGroup::UnitCircle as i32 => GroupTag::UnitCircle,
            g if g == EwGroup::NonzeroComplex as i32 => GroupTag::NonzeroComplex,
            _ => return Err(invalid("unknown group")),
        };
        let pi = stratify(a, g, tol)?;
        let count = out(blocks)?;
        if labels.is_null() {
            return Err(Fail(EwStatus::NullPointer, "null output pointer".into()));
        }
        std::slice::from_raw_parts_mut(labels, a.dim()).copy_from_slice(&pi.labels());
        *count = pi.len();
        Ok(())
    })
}

/// Dimension of the common kernel of all Hadamard powers of `A`.
///
/// # Safety
/// `a` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_simultaneous_kernel_dim(a: *const EwMatrix, tol: f64, result: *mut usize) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        *dst = simultaneous_kernel(matrix(a)?, tol)?.dim();
        Ok(())
    })
}

/// Writes 1 if `A` is Hermitian PSD within `tol`, else 0.
///
/// # Safety
/// `a` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ew_psd_check(a: *const EwMatrix, tol: f64, result: *mut i32) -> EwStatus {
    guard(|| {
        let dst = out(result)?;
        *dst = psd_check(matrix(a)?, tol)? as i32;
        Ok(())
    })
}
