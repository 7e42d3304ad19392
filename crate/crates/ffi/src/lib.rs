//! C ABI over `retwords`.
//!
//! Sources are opaque handles created by `rmw_source_*` and released with
//! [`rmw_source_free`]. Every fallible call returns an [`RmwStatus`]; the
//! message of the last failure on the calling thread is available through
//! [`rmw_last_error`]. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use retwords::beta::{dominant_root, is_parry_simple, satisfies_rm_conditions};
use retwords::cli::parse_source;
use retwords::rm::{check_rm, Method};
use retwords::{build_factor_table, builtin, return_set, Error, Substitution, WordSource};

pub const RMW_ABI_VERSION: u32 = 1;

/// `method` argument of [`rmw_check_rm`].
pub const RMW_METHOD_FULL_SCAN: c_int = 0;
pub const RMW_METHOD_BISPECIAL: c_int = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmwStatus {
    Ok = 0,
    InvalidArgument = 1,
    NotAFactor = 2,
    /// The finite prefix scanned could not certify the answer.
    Certification = 3,
    BufferTooSmall = 4,
    /// An internal consistency check failed.
    Internal = 5,
    Panic = 6,
}

/// Opaque handle to an infinite word.
pub struct RmwSource {
    inner: WordSource,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> RmwStatus {
    match err {
        Error::NotAFactor(_) => RmwStatus::NotAFactor,
        e if e.is_certification() => RmwStatus::Certification,
        Error::DepthCap { .. } | Error::NumericPrecision(_) => RmwStatus::Certification,
        Error::TheoremViolation(_) => RmwStatus::Internal,
        _ => RmwStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (RmwStatus, String)>) -> RmwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RmwStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside retwords".into());
            RmwStatus::Panic
        }
    }
}

fn lib<T>(r: retwords::Result<T>) -> Result<T, (RmwStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn invalid(msg: &str) -> (RmwStatus, String) {
    (RmwStatus::InvalidArgument, msg.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (RmwStatus, String)> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn source_arg<'a>(p: *const RmwSource) -> Result<&'a WordSource, (RmwStatus, String)> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| invalid("source handle is null"))
}

unsafe fn coeffs_arg<'a>(t: *const u32, m: usize) -> Result<&'a [u32], (RmwStatus, String)> {
    if t.is_null() {
        return Err(invalid("coefficient pointer is null"));
    }
    Ok(std::slice::from_raw_parts(t, m))
}

unsafe fn emit(out: *mut *mut RmwSource, src: WordSource) -> Result<(), (RmwStatus, String)> {
    if out.is_null() {
        return Err(invalid("output handle pointer is null"));
    }
    *out = Box::into_raw(Box::new(RmwSource { inner: src }));
    Ok(())
}

#[no_mangle]
pub extern "C" fn rmw_abi_version() -> u32 {
    RMW_ABI_VERSION
}

/// Copies the last error message of this thread, NUL-terminated and
/// truncated to `len` bytes. Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn rmw_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// One of `fibonacci`, `tribonacci`, `thue_morse`, `chacon_recoded`, `r4_example`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_builtin(name: *const c_char, out: *mut *mut RmwSource) -> RmwStatus {
    guard(|| emit(out, lib(builtin(str_arg(name, "name")?))?))
}

/// Any source specification accepted by the command-line `--source` flag.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_parse(spec: *const c_char, out: *mut *mut RmwSource) -> RmwStatus {
    guard(|| emit(out, lib(parse_source(str_arg(spec, "spec")?))?))
}

/// Fixed point of a substitution given in the text format
/// (`alphabet:`, `x -> word` and `seed:` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_from_substitution_text(text: *const c_char, out: *mut *mut RmwSource) -> RmwStatus {
    guard(|| {
        let s = lib(Substitution::parse(str_arg(text, "text")?))?;
        emit(out, lib(WordSource::from_substitution("substitution", s))?)
    })
}

/// Characteristic Sturmian word of a directive sequence, cycled.
///
/// # Safety
/// `directives` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_sturmian(
    directives: *const u32,
    len: usize,
    out: *mut *mut RmwSource,
) -> RmwStatus {
    guard(|| emit(out, lib(WordSource::sturmian(coeffs_arg(directives, len)?.to_vec()))?))
}

/// Fixed point of the β-substitution of `t[0..m]`.
///
/// # Safety
/// `t` must point to `m` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_beta(t: *const u32, m: usize, out: *mut *mut RmwSource) -> RmwStatus {
    guard(|| emit(out, lib(retwords::beta::beta_source(coeffs_arg(t, m)?))?))
}

/// # Safety
/// `src` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_free(src: *mut RmwSource) {
    if !src.is_null() {
        drop(Box::from_raw(src));
    }
}

/// Writes the first `n` letters as UTF-8 plus a NUL. `*written` receives the
/// byte length without the NUL, also when the buffer is too small.
///
/// # Safety
/// `buf` must point to `buf_len` writable bytes; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_source_prefix(
    src: *const RmwSource,
    n: usize,
    buf: *mut c_char,
    buf_len: usize,
    written: *mut usize,
) -> RmwStatus {
    guard(|| {
        let src = source_arg(src)?;
        if written.is_null() {
            return Err(invalid("written is null"));
        }
        let text = src.alphabet().render(&lib(src.prefix(n))?);
        *written = text.len();
        if buf.is_null() || buf_len < text.len() + 1 {
            return Err((RmwStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1)));
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// Number of distinct factors of length `n`.
///
/// # Safety
/// `src` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_complexity(src: *const RmwSource, n: usize, out: *mut usize) -> RmwStatus {
    guard(|| {
        let src = source_arg(src)?;
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let table = lib(build_factor_table(src, n.max(1)))?;
        *out = lib(table.complexity(n))?;
        Ok(())
    })
}

/// Number of return words of `factor`, written with the source's symbols.
///
/// # Safety
/// `src` must be a live handle, `factor` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_return_count(src: *const RmwSource, factor: *const c_char, out: *mut usize) -> RmwStatus {
    guard(|| {
        let src = source_arg(src)?;
        let w = lib(src.alphabet().parse(str_arg(factor, "factor")?))?;
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        *out = lib(return_set(src, &w))?.len();
        Ok(())
    })
}

/// Checks R_m up to `max_len`. `*holds` is 1 when every factor has exactly
/// `m` return words, else 0.
///
/// # Safety
/// `src` must be a live handle; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_check_rm(
    src: *const RmwSource,
    m: usize,
    max_len: usize,
    method: c_int,
    holds: *mut c_int,
) -> RmwStatus {
    guard(|| {
        let src = source_arg(src)?;
        let method = match method {
            RMW_METHOD_FULL_SCAN => Method::FullScan,
            RMW_METHOD_BISPECIAL => Method::BispecialReduction,
            _ => return Err(invalid("unknown method")),
        };
        if holds.is_null() {
            return Err(invalid("holds is null"));
        }
        *holds = c_int::from(lib(check_rm(src, m, max_len, method))?.holds());
        Ok(())
    })
}

/// # Safety
/// `t` must point to `m` values; `beta` and `residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_beta_dominant_root(
    t: *const u32,
    m: usize,
    beta: *mut f64,
    residual: *mut f64,
) -> RmwStatus {
    guard(|| {
        let root = lib(dominant_root(coeffs_arg(t, m)?))?;
        if beta.is_null() || residual.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *beta = root.beta;
        *residual = root.residual;
        Ok(())
    })
}

/// # Safety
/// `t` must point to `m` values; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rmw_beta_conditions(
    t: *const u32,
    m: usize,
    parry_simple: *mut c_int,
    rm_conditions: *mut c_int,
) -> RmwStatus {
    guard(|| {
        let t = coeffs_arg(t, m)?;
        lib(retwords::beta::validate(t))?;
        if parry_simple.is_null() || rm_conditions.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *parry_simple = c_int::from(is_parry_simple(t));
        *rm_conditions = c_int::from(satisfies_rm_conditions(t));
        Ok(())
    })
}
