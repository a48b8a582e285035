//! C ABI over the m0n engine.
//!
//! Tables are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns an `M0nStatus`; on anything but `OK` the
//! message is available from `m0n_last_error_message` on the same thread.
//! Strings handed out by the library must be released with `m0n_string_free`.
//! Panics never cross the boundary; they surface as `M0N_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use m0n::conjectures::check_log_concave;
use m0n::invariant::InvTable;
use num_bigint::BigInt;
use m0n::partition::Partition;
use m0n::recursion::RepTable;
use m0n::symfun::{mult_lambda, Caps};
use m0n::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum M0nStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    /// The engine contradicted itself (non-integral value, inexact division, mismatch).
    Inconsistency = 4,
    Io = 5,
    Panic = 6,
}

/// Which series of a table to read.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum M0nSeries {
    Qplus = 0,
    Q = 1,
    P = 2,
}

/// Q⁺, Q and P under fixed caps.
pub struct M0nRepTable(RepTable);

/// 𝔮⁺, 𝔮 and 𝔭 under fixed caps.
pub struct M0nInvSeries(InvTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> M0nStatus {
    match e {
        _ if e.is_inconsistency() => M0nStatus::Inconsistency,
        Error::TruncationOutOfRange { .. } | Error::PadOutOfRange { .. } | Error::OracleTooLarge { .. } => M0nStatus::OutOfRange,
        Error::Io(_) | Error::Json(_) | Error::CacheCorrupt { .. } => M0nStatus::Io,
        _ => M0nStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (M0nStatus, String)>) -> M0nStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => M0nStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            M0nStatus::Panic
        }
    }
}

fn engine(e: Error) -> (M0nStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (M0nStatus, String) {
    (M0nStatus::NullPointer, format!("{what} is null"))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (M0nStatus, String)> {
    let c = CString::new(s).map_err(|e| (M0nStatus::InvalidArgument, e.to_string()))?;
    // SAFETY: caller guarantees `out` is a valid, writable pointer (checked non-null).
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Computes the representation tables for n ≤ cap_n and t-degree ≤ cap_k.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn m0n_rep_table_new(cap_n: u32, cap_k: u32, out: *mut *mut M0nRepTable) -> M0nStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = RepTable::compute(Caps::new(cap_n, cap_k)).map_err(engine)?;
        *out = Box::into_raw(Box::new(M0nRepTable(t)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from `m0n_rep_table_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn m0n_rep_table_free(table: *mut M0nRepTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

fn rep_series(t: &RepTable, series: M0nSeries, n: u32) -> Result<&m0n::symfun::IntSym, (M0nStatus, String)> {
    if n > t.caps.n {
        return Err((M0nStatus::OutOfRange, format!("n = {n} exceeds cap {}", t.caps.n)));
    }
    Ok(match series {
        M0nSeries::Qplus => &t.qplus[n as usize],
        M0nSeries::Q => &t.q[n as usize],
        M0nSeries::P => &t.p[n as usize],
    })
}

/// JSON for the degree-n part of a series, in the h basis:
/// `{"basis","cap_n","cap_k","terms":[{"lambda","t","c"}]}`.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable. Free the result
/// with `m0n_string_free`.
#[no_mangle]
pub unsafe extern "C" fn m0n_rep_table_json(table: *const M0nRepTable, series: M0nSeries, n: u32, out: *mut *mut c_char) -> M0nStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = rep_series(&t.0, series, n)?;
        out_string(serde_json::to_string(f).map_err(|e| engine(e.into()))?, out)
    })
}

/// Multiplicity of the irreducible s_λ·t^k in a series, λ given by its parts
/// (nonincreasing) and n = |λ|.
///
/// # Safety
/// `table` must be a live handle, `parts` must point to `len` values, and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn m0n_rep_table_mult(
    table: *const M0nRepTable,
    series: M0nSeries,
    parts: *const u32,
    len: usize,
    k: u32,
    out: *mut i64,
) -> M0nStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() || (parts.is_null() && len > 0) {
            return Err(null("parts or out"));
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(parts, len) };
        let lambda = Partition::new(slice).map_err(engine)?;
        if k > t.0.caps.k {
            return Err((M0nStatus::OutOfRange, format!("k = {k} exceeds cap {}", t.0.caps.k)));
        }
        let f = rep_series(&t.0, series, lambda.size())?;
        let m = mult_lambda(f, &lambda, k).map_err(engine)?;
        *out = i64::try_from(&m).map_err(|_| (M0nStatus::OutOfRange, format!("multiplicity {m} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Computes 𝔮⁺, 𝔮, 𝔭 for n ≤ cap_n and t-degree ≤ cap_k.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn m0n_inv_series_new(cap_n: u32, cap_k: u32, out: *mut *mut M0nInvSeries) -> M0nStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = InvTable::compute(Caps::new(cap_n, cap_k)).map_err(engine)?;
        *out = Box::into_raw(Box::new(M0nInvSeries(t)));
        Ok(())
    })
}

/// # Safety
/// `series` must come from `m0n_inv_series_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn m0n_inv_series_free(series: *mut M0nInvSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// The coefficient of qⁿtᵏ as a decimal string (values outgrow 64 bits quickly).
///
/// # Safety
/// `series` must be a live handle; `out` must be writable. Free the result
/// with `m0n_string_free`.
#[no_mangle]
pub unsafe extern "C" fn m0n_inv_series_coeff(
    series: *const M0nInvSeries,
    which: M0nSeries,
    n: u32,
    k: u32,
    out: *mut *mut c_char,
) -> M0nStatus {
    guard(|| {
        let s = series.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let caps = s.0.caps;
        if n > caps.n || k > caps.k {
            return Err((M0nStatus::OutOfRange, format!("(n, k) = ({n}, {k}) outside caps ({}, {})", caps.n, caps.k)));
        }
        let c: BigInt = match which {
            M0nSeries::Qplus => s.0.qplus.coeff(n, k),
            M0nSeries::Q => s.0.q_nk(n, k),
            M0nSeries::P => s.0.p_nk(n, k),
        };
        out_string(c.to_string(), out)
    })
}

/// Whether a_k² ≥ a_{k−1}a_{k+1} at every interior k.
///
/// # Safety
/// `values` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn m0n_log_concave(values: *const i64, len: usize, out: *mut bool) -> M0nStatus {
    guard(|| {
        if out.is_null() || (values.is_null() && len > 0) {
            return Err(null("values or out"));
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(values, len) };
        let seq: Vec<BigInt> = slice.iter().map(|&v| BigInt::from(v)).collect();
        *out = check_log_concave("ffi", &seq).holds();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn m0n_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn m0n_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn m0n_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains nul"),
    };
    VERSION.as_ptr()
}
