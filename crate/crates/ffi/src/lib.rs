//! C interface to the solver.
//!
//! Equations are opaque handles. Every call returns an [`AodeStatus`]; on
//! success results are written through out-pointers as JSON strings owned
//! by the caller and released with [`aode_string_free`]. After a failure,
//! [`aode_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use aode_core::poly::{parse_polynomial, parse_tuple, validate_input, BiPoly, Point};
use aode_core::puiseux::{default_bound, places_at};
use aode_core::solver::{classify, constant_solutions, critical_set, direct_method, solve_at};
use aode_core::AodeError;
use serde_json::Value;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AodeStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    InvalidArgument = 1,
    /// Parse errors, reducible equations, points off the curve and similar.
    ValidationFailed = 2,
    /// An extension degree cap or precision limit was hit.
    ResourceLimit = 3,
    /// Unexpected internal failure.
    Internal = 4,
}

/// A parsed and validated equation `F(y, y') = 0`.
pub struct AodeEquation {
    f: BiPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &AodeError) -> AodeStatus {
    set_error(e.to_string());
    match e.exit_code() {
        3 => AodeStatus::ResourceLimit,
        _ => AodeStatus::ValidationFailed,
    }
}

fn guarded(body: impl FnOnce() -> AodeStatus) -> AodeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal error".into());
            AodeStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, AodeStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(AodeStatus::InvalidArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        AodeStatus::InvalidArgument
    })
}

unsafe fn write_json(out: *mut *mut c_char, v: aode_core::Result<Value>) -> AodeStatus {
    match v {
        Ok(v) => {
            let s = CString::new(v.to_string()).expect("JSON has no nul bytes");
            *out = s.into_raw();
            AodeStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Shared prologue: checks the handle and out-pointer and resets `*out`.
unsafe fn prologue<'a>(eq: *const AodeEquation, out: *mut *mut c_char) -> Result<&'a AodeEquation, AodeStatus> {
    if eq.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return Err(AodeStatus::InvalidArgument);
    }
    *out = ptr::null_mut();
    Ok(&*eq)
}

fn point(src: &str) -> aode_core::Result<Point> {
    parse_tuple(src).map(|(a, b)| Point::new(a, b))
}

/// Parses and validates `ode`, a polynomial in `y` and `y'`. On success
/// `*out` receives a handle to release with [`aode_equation_free`].
///
/// # Safety
/// `ode` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aode_equation_new(ode: *const c_char, out: *mut *mut AodeEquation) -> AodeStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null pointer argument".into());
            return AodeStatus::InvalidArgument;
        }
        *out = ptr::null_mut();
        let src = match str_arg(ode) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match parse_polynomial(src).and_then(|f| validate_input(&f).map(|_| f)) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(AodeEquation { f }));
                AodeStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `eq` must come from [`aode_equation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aode_equation_free(eq: *mut AodeEquation) {
    if !eq.is_null() {
        drop(Box::from_raw(eq));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aode_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn aode_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `2(deg_y F - 1) deg_y' F + 1`.
///
/// # Safety
/// `eq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aode_default_bound(eq: *const AodeEquation, out: *mut usize) -> AodeStatus {
    if eq.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return AodeStatus::InvalidArgument;
    }
    *out = default_bound(&(*eq).f);
    AodeStatus::Ok
}

/// Solutions with initial tuple `at` (text such as `"1, sqrt(2)"`) as a
/// JSON array of solution records. `order` 0 selects twice the
/// multiplicity of the point.
///
/// # Safety
/// Pointers must be valid; `at` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn aode_solve(
    eq: *const AodeEquation,
    at: *const c_char,
    order: usize,
    out: *mut *mut c_char,
) -> AodeStatus {
    guarded(|| {
        let eq = match prologue(eq, out) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let at = match str_arg(at) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let r = point(at).and_then(|c| {
            let n = match order {
                0 => eq.f.multiplicity_at(&c.y, &c.z).map(|m| 2 * m).unwrap_or(1),
                n => n,
            };
            let sols = solve_at(&eq.f, &c, n)?;
            Ok(Value::Array(sols.iter().map(|s| s.to_json()).collect()))
        });
        write_json(out, r)
    })
}

/// Places centered at `at` as a JSON array. `order` 0 selects the default
/// bound.
///
/// # Safety
/// Pointers must be valid; `at` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn aode_places(
    eq: *const AodeEquation,
    at: *const c_char,
    order: usize,
    out: *mut *mut c_char,
) -> AodeStatus {
    guarded(|| {
        let eq = match prologue(eq, out) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let at = match str_arg(at) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let n = if order == 0 { default_bound(&eq.f) } else { order };
        let r = point(at).and_then(|c| {
            let ps = places_at(&eq.f, &c, n)?;
            Ok(Value::Array(ps.iter().map(|p| p.to_json()).collect::<aode_core::Result<_>>()?))
        });
        write_json(out, r)
    })
}

/// Separant recursion at `at` through `t^order` (`order` >= 1).
///
/// # Safety
/// Pointers must be valid; `at` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn aode_direct(
    eq: *const AodeEquation,
    at: *const c_char,
    order: usize,
    out: *mut *mut c_char,
) -> AodeStatus {
    guarded(|| {
        let eq = match prologue(eq, out) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let at = match str_arg(at) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if order == 0 {
            set_error("order must be positive".into());
            return AodeStatus::InvalidArgument;
        }
        let r = point(at).and_then(|c| Ok(direct_method(&eq.f, &c, order)?.to_json()));
        write_json(out, r)
    })
}

/// Classification record as JSON, using up to `jobs` threads.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aode_classify(eq: *const AodeEquation, jobs: usize, out: *mut *mut c_char) -> AodeStatus {
    guarded(|| {
        let eq = match prologue(eq, out) {
            Ok(e) => e,
            Err(s) => return s,
        };
        write_json(out, classify(&eq.f, 1, jobs.max(1)).map(|c| c.to_json()))
    })
}

/// Critical set as a JSON array of tagged points.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aode_critical(eq: *const AodeEquation, out: *mut *mut c_char) -> AodeStatus {
    guarded(|| {
        let eq = match prologue(eq, out) {
            Ok(e) => e,
            Err(s) => return s,
        };
        write_json(out, critical_set(&eq.f).map(|cs| Value::Array(cs.iter().map(|c| c.to_json()).collect())))
    })
}

/// Constant solutions as a JSON array of numbers.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aode_constants(eq: *const AodeEquation, out: *mut *mut c_char) -> AodeStatus {
    guarded(|| {
        let eq = match prologue(eq, out) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let r = constant_solutions(&eq.f)
            .map(|cs| Value::Array(cs.iter().map(aode_core::numbers::json::value_to_json).collect()));
        write_json(out, r)
    })
}
