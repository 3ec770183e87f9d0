//! C ABI over `toricq`.
//!
//! Problems are parsed from the same TOML text the command-line tool reads
//! and handed out as opaque `TqProblem` handles. Every fallible call returns
//! a [`TqStatus`]; on failure `tq_last_error_message` describes the cause.
//! Strings returned through out-pointers are owned by the caller and must be
//! released with [`tq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toricq::cli::ProblemFile;
use toricq::gitq::{self, Support, WeightSystem};
use toricq::inertia;
use toricq::quasimap::{self, DegreeVector};
use toricq::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// Opaque handle to a parsed problem.
pub struct TqProblem {
    file: ProblemFile,
    ws: WeightSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: TqStatus, msg: &str) -> TqStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> TqStatus {
    let status = if e.exit_code() == 2 {
        TqStatus::Parse
    } else {
        TqStatus::Domain
    };
    fail(status, &e.to_string())
}

fn guard(f: impl FnOnce() -> TqStatus) -> TqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == TqStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(TqStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TqStatus> {
    if p.is_null() {
        return Err(fail(TqStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TqStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> TqStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TqStatus::Ok
        }
        Err(_) => fail(TqStatus::Domain, "report contains a NUL byte"),
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report values serialize")
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or an empty string.
/// Valid until the next `tq_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a TOML problem.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tq_problem_parse(toml: *const c_char, out: *mut *mut TqProblem) -> TqStatus {
    guard(|| {
        if out.is_null() {
            return fail(TqStatus::NullPointer, "null out pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(toml) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed = ProblemFile::parse(text).and_then(|file| {
            let ws = file.weight_system()?;
            Ok(TqProblem { file, ws })
        });
        match parsed {
            Ok(p) => {
                *out = Box::into_raw(Box::new(p));
                TqStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must come from [`tq_problem_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tq_problem_free(problem: *mut TqProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Torus rank, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tq_problem_rank(problem: *const TqProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.ws.rank())
}

/// Number of weights, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tq_problem_weight_count(problem: *const TqProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.ws.len())
}

/// Whether the support given by 1-based weight indices is semistable.
///
/// # Safety
/// `problem` must be a live handle, `indices` must point to `len` values
/// (or be null when `len` is 0), and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tq_is_ss_support(
    problem: *const TqProblem,
    indices: *const usize,
    len: usize,
    out: *mut bool,
) -> TqStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(TqStatus::NullPointer, "null problem");
        };
        if out.is_null() || (indices.is_null() && len > 0) {
            return fail(TqStatus::NullPointer, "null argument");
        }
        let idx: &[usize] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(indices, len)
        };
        let support = match Support::from_one_based(idx) {
            Ok(s) => s,
            Err(e) => return from_error(&e),
        };
        match gitq::is_ss_support(&p.ws, &support) {
            Ok(b) => {
                *out = b;
                TqStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Quotient report as compact JSON.
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tq_quotient_report_json(problem: *const TqProblem, out: *mut *mut c_char) -> TqStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(TqStatus::NullPointer, "null problem");
        };
        if out.is_null() {
            return fail(TqStatus::NullPointer, "null out pointer");
        }
        match gitq::quotient_report(&p.ws) {
            Ok(r) => write_string(out, json(&r)),
            Err(e) => from_error(&e),
        }
    })
}

/// Inertia sectors as a JSON array; `order_cap` 0 selects the default cap.
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tq_inertia_sectors_json(
    problem: *const TqProblem,
    order_cap: u64,
    out: *mut *mut c_char,
) -> TqStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(TqStatus::NullPointer, "null problem");
        };
        if out.is_null() {
            return fail(TqStatus::NullPointer, "null out pointer");
        }
        let cap = if order_cap == 0 {
            inertia::DEFAULT_ORDER_CAP
        } else {
            order_cap
        };
        match inertia::inertia_sectors(&p.ws, cap) {
            Ok(s) => write_string(out, json(&s)),
            Err(e) => from_error(&e),
        }
    })
}

/// Affine gauged-map report for a degree such as `"1/3"` or `"1,0"`. A null
/// `degree` uses the degree from the problem file.
///
/// # Safety
/// `problem` must be a live handle, `degree` null or NUL-terminated, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tq_affine_report_json(
    problem: *const TqProblem,
    degree: *const c_char,
    out: *mut *mut c_char,
) -> TqStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(TqStatus::NullPointer, "null problem");
        };
        if out.is_null() {
            return fail(TqStatus::NullPointer, "null out pointer");
        }
        let d = if degree.is_null() {
            match p.file.degree() {
                Ok(Some(d)) => d,
                Ok(None) => return fail(TqStatus::Parse, "no degree given and none in the problem"),
                Err(e) => return from_error(&e),
            }
        } else {
            let text = match read_str(degree) {
                Ok(t) => t,
                Err(s) => return s,
            };
            match DegreeVector::parse(text) {
                Ok(d) => d,
                Err(e) => return from_error(&e),
            }
        };
        match quasimap::affine_report(&p.ws, &d) {
            Ok(r) => write_string(out, json(&r)),
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `tq_*` out-pointer and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
