//! C ABI for `farey-laurent`.
//!
//! Objects cross the boundary as opaque handles created by `fl_*_new` /
//! `fl_*_parse` style constructors and released with the matching
//! `fl_*_free`. Every fallible call returns an [`FlStatus`]; on failure
//! [`fl_last_error`] holds a message for the calling thread. Strings
//! returned by the library are owned by the caller and released with
//! [`fl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use farey_laurent::algebra::{Degree, Field, Poly};
use farey_laurent::cf::{approximation_exponent, cf_expand, CfExpansion};
use farey_laurent::ergodic::{invariance_exact, rate_experiment, ExperimentConfig, InvariantMap, MapKind, Measure};
use farey_laurent::farey_algebraic::{alg_step, HParam};
use farey_laurent::farey_geometric::{geo_step, GeoState};
use farey_laurent::laurent::{Element, LaurentSeries, RationalFunction};
use farey_laurent::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidField = 4,
    DomainError = 5,
    DivisionByZero = 6,
    InsufficientPrecision = 7,
    DepthExceeded = 8,
    PreconditionFailed = 9,
    DepthInfeasible = 10,
    OtherError = 11,
    /// A Rust panic was caught at the boundary; a library bug.
    Panic = 12,
}

/// Map selector for [`fl_invariance_exact`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlMap {
    Geo = 0,
    Alg = 1,
}

/// Measure selector for [`fl_invariance_exact`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlMeasure {
    MuG = 0,
    MuGPerturbed = 1,
    MuA = 2,
    Haar = 3,
}

/// A finite field F_q.
pub struct FlField(Field);

/// An element of F_q((1/t)): exact rational or a series known to a floor.
pub struct FlElement(Element);

/// A continued fraction expansion with its convergents.
pub struct FlCf(CfExpansion);

/// The parameter h of the algebraic Farey map.
pub struct FlHParam(HParam);

/// Summary of a rate experiment.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FlRateSummary {
    pub mean: f64,
    pub sd: f64,
    pub target: f64,
    pub used: usize,
    pub terminated: usize,
    pub dropped: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FlStatus {
    match e {
        Error::Parse(_) => FlStatus::ParseError,
        Error::InvalidField(_) => FlStatus::InvalidField,
        Error::Domain(_) | Error::ZeroInput => FlStatus::DomainError,
        Error::DivisionByZero => FlStatus::DivisionByZero,
        Error::InsufficientPrecision { .. } => FlStatus::InsufficientPrecision,
        Error::DepthExceeded { .. } => FlStatus::DepthExceeded,
        Error::PreconditionFailed(_) => FlStatus::PreconditionFailed,
        Error::DepthInfeasible { .. } => FlStatus::DepthInfeasible,
        _ => FlStatus::OtherError,
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), FlStatus>) -> FlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            FlStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside farey-laurent");
            FlStatus::Panic
        }
    }
}

fn lib<T>(r: farey_laurent::Result<T>) -> Result<T, FlStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, FlStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer argument");
        FlStatus::NullPointer
    })
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, FlStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(FlStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        FlStatus::InvalidUtf8
    })
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), FlStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(FlStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), FlStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(FlStatus::NullPointer);
    }
    *out = CString::new(s).unwrap_or_default().into_raw();
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, value: T) -> Result<(), FlStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(FlStatus::NullPointer);
    }
    *out = value;
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates F_q. `modulus` lists ascending coefficients of the defining
/// polynomial for q = p^e with e > 1; pass null and 0 for prime q.
///
/// # Safety
/// `modulus` must point to `modulus_len` values or be null.
#[no_mangle]
pub unsafe extern "C" fn fl_field_new(
    q: u32,
    modulus: *const u32,
    modulus_len: usize,
    out: *mut *mut FlField,
) -> FlStatus {
    guard(|| {
        let m = if modulus.is_null() || modulus_len == 0 {
            None
        } else {
            Some(std::slice::from_raw_parts(modulus, modulus_len).to_vec())
        };
        put(out, FlField(lib(Field::from_q(q, m))?))
    })
}

/// # Safety
/// `field` must come from [`fl_field_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_field_free(field: *mut FlField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_field_q(field: *const FlField) -> u32 {
    field.as_ref().map(|f| f.0.q()).unwrap_or(0)
}

/// Parses an exact element such as `"(t+1)/(t^3+2)"`.
///
/// # Safety
/// `field` must be a live handle and `s` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fl_element_rational(
    field: *const FlField,
    s: *const c_char,
    out: *mut *mut FlElement,
) -> FlStatus {
    guard(|| {
        let field = deref(field)?;
        let r = lib(RationalFunction::parse(&field.0, text(s)?))?;
        put(out, FlElement(Element::Exact(r)))
    })
}

/// Parses a series `"{q: 3, top: -1, coeffs: [1,0,2], floor: -8}"`.
///
/// # Safety
/// `field` must be a live handle and `s` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fl_element_series(
    field: *const FlField,
    s: *const c_char,
    out: *mut *mut FlElement,
) -> FlStatus {
    guard(|| {
        let field = deref(field)?;
        let x = lib(LaurentSeries::parse(&field.0, text(s)?))?;
        put(out, FlElement(Element::Series(x)))
    })
}

/// Text form of an element; free with [`fl_string_free`].
///
/// # Safety
/// `x` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_element_to_string(x: *const FlElement, out: *mut *mut c_char) -> FlStatus {
    guard(|| put_string(out, deref(x)?.0.to_string()))
}

/// # Safety
/// `x` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_element_free(x: *mut FlElement) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Expands `x` (with |x| < 1) into at most `max_k` partial quotients.
///
/// # Safety
/// `x` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_cf_expand(x: *const FlElement, max_k: usize, out: *mut *mut FlCf) -> FlStatus {
    guard(|| {
        let cf = lib(cf_expand(&deref(x)?.0, max_k))?;
        put(out, FlCf(cf))
    })
}

/// Number of partial quotients.
///
/// # Safety
/// `cf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_cf_len(cf: *const FlCf) -> usize {
    cf.as_ref().map(|c| c.0.len()).unwrap_or(0)
}

/// Whether the expansion ended because the input is rational.
///
/// # Safety
/// `cf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_cf_terminated(cf: *const FlCf) -> bool {
    cf.as_ref().map(|c| c.0.terminated()).unwrap_or(false)
}

fn index_ok(cf: &CfExpansion, k: usize) -> Result<(), FlStatus> {
    if k == 0 || k > cf.len() {
        set_error(&format!("index {k} outside 1..={}", cf.len()));
        return Err(FlStatus::DepthExceeded);
    }
    Ok(())
}

/// Partial quotient `A_k`, `1 <= k <= len`.
///
/// # Safety
/// `cf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_cf_partial_quotient(cf: *const FlCf, k: usize, out: *mut *mut c_char) -> FlStatus {
    guard(|| {
        let cf = &deref(cf)?.0;
        index_ok(cf, k)?;
        put_string(out, cf.a(k).to_string())
    })
}

/// Convergent `P_k` and `Q_k` as polynomial strings.
///
/// # Safety
/// `cf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_cf_convergent(
    cf: *const FlCf,
    k: usize,
    p_out: *mut *mut c_char,
    q_out: *mut *mut c_char,
) -> FlStatus {
    guard(|| {
        let cf = &deref(cf)?.0;
        index_ok(cf, k)?;
        put_string(p_out, cf.p(k as i64).to_string())?;
        put_string(q_out, cf.q(k as i64).to_string())
    })
}

/// # Safety
/// `cf` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_cf_free(cf: *mut FlCf) {
    if !cf.is_null() {
        drop(Box::from_raw(cf));
    }
}

/// Exponent `e` with `|x - p/q| = q^e`; `*is_exact` is set when the
/// difference is zero (and `*exponent` is then left untouched).
///
/// # Safety
/// `x` must be a live handle; `p`, `q` NUL-terminated polynomials.
#[no_mangle]
pub unsafe extern "C" fn fl_approximation_exponent(
    x: *const FlElement,
    p: *const c_char,
    q: *const c_char,
    exponent: *mut i64,
    is_exact: *mut bool,
) -> FlStatus {
    guard(|| {
        let x = &deref(x)?.0;
        let field = x.field();
        let p = lib(Poly::parse(field, text(p)?))?;
        let q = lib(Poly::parse(field, text(q)?))?;
        match lib(approximation_exponent(x, &p, &q))? {
            Degree::Finite(e) => {
                put_value(exponent, e)?;
                put_value(is_exact, false)
            }
            Degree::NegInf => put_value(is_exact, true),
        }
    })
}

/// One step of the geometric Farey map on `(x, n)`.
///
/// # Safety
/// `x` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_geo_step(
    x: *const FlElement,
    n: i64,
    out: *mut *mut FlElement,
    n_out: *mut i64,
) -> FlStatus {
    guard(|| {
        let s = lib(geo_step(&GeoState::new(deref(x)?.0.clone(), n)))?;
        put_value(n_out, s.n)?;
        put(out, FlElement(s.f))
    })
}

/// Parses h as `"series:0,c1,c2,..."` or a rational of degree -1.
///
/// # Safety
/// `field` must be a live handle and `s` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fl_hparam_parse(
    field: *const FlField,
    s: *const c_char,
    out: *mut *mut FlHParam,
) -> FlStatus {
    guard(|| {
        let field = deref(field)?;
        put(out, FlHParam(lib(HParam::parse(&field.0, text(s)?))?))
    })
}

/// # Safety
/// `h` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_hparam_free(h: *mut FlHParam) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// One step of the algebraic Farey map `F_h`.
///
/// # Safety
/// `x` and `h` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn fl_alg_step(x: *const FlElement, h: *const FlHParam, out: *mut *mut FlElement) -> FlStatus {
    guard(|| {
        let y = lib(alg_step(&deref(x)?.0, &deref(h)?.0))?;
        put(out, FlElement(y))
    })
}

/// Runs the convergence-rate experiment for `F_h` (or the Artin map when
/// `h` is null) on `samples` Haar samples of orbit length `ell`.
///
/// # Safety
/// `field` must be a live handle; `h` live or null.
#[no_mangle]
pub unsafe extern "C" fn fl_rate_experiment(
    field: *const FlField,
    h: *const FlHParam,
    samples: usize,
    ell: usize,
    seed: u64,
    out: *mut FlRateSummary,
) -> FlStatus {
    guard(|| {
        let field = deref(field)?.0.clone();
        let map = match h.as_ref() {
            Some(h) => MapKind::Alg(h.0.clone()),
            None => MapKind::Artin,
        };
        let r = lib(rate_experiment(&ExperimentConfig::new(field, map, samples, ell, seed)))?;
        put_value(
            out,
            FlRateSummary {
                mean: r.mean,
                sd: r.sd,
                target: r.target,
                used: r.used,
                terminated: r.terminated,
                dropped: r.dropped,
            },
        )
    })
}

/// Exact invariance check; the largest discrepancy is returned as the
/// fraction `num/den`. `h` is required for [`FlMap::Alg`].
///
/// # Safety
/// `field` must be a live handle; `h` live or null.
#[no_mangle]
pub unsafe extern "C" fn fl_invariance_exact(
    field: *const FlField,
    map: FlMap,
    h: *const FlHParam,
    measure: FlMeasure,
    depth: usize,
    levels: i64,
    num: *mut i64,
    den: *mut i64,
) -> FlStatus {
    guard(|| {
        let field = &deref(field)?.0;
        let map = match map {
            FlMap::Geo => InvariantMap::Geo,
            FlMap::Alg => InvariantMap::Alg(deref(h)?.0.clone()),
        };
        let measure = match measure {
            FlMeasure::MuG => Measure::MuG,
            FlMeasure::MuGPerturbed => Measure::MuGPerturbed,
            FlMeasure::MuA => Measure::MuA,
            FlMeasure::Haar => Measure::Haar,
        };
        let r = lib(invariance_exact(field, &map, measure, depth, levels))?;
        let d = r.max_discrepancy;
        let (n, m) = match (i64::try_from(*d.numer()), i64::try_from(*d.denom())) {
            (Ok(n), Ok(m)) => (n, m),
            _ => {
                set_error("discrepancy does not fit in 64 bits");
                return Err(FlStatus::OtherError);
            }
        };
        put_value(num, n)?;
        put_value(den, m)
    })
}
