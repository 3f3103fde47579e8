//! C ABI over the region, corollary and scheme calculators.
//!
//! Objects are opaque heap handles created by `md_*_new`/`md_*_build` style
//! calls and released with the matching `md_*_free`. Every fallible call
//! returns an `MdStatus` code; the message of the most recent failure on the
//! calling thread is available from `md_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use miso_dof::quality::{QualityProfile, User};
use miso_dof::region::{self, DofPoint, DofRegion, RegionStatus};
use miso_dof::scheme::{SchemeConfig, SchemeKind, SchemeOptions};
use miso_dof::{corollary, Error};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdStatus {
    Ok = 0,
    NullPointer = 1,
    Malformed = 2,
    InvalidProfile = 3,
    Domain = 4,
    Infeasible = 5,
    WrongCase = 6,
    InvalidDelta = 7,
    Degenerate = 8,
    OutOfRange = 9,
    Grid = 10,
    Budget = 11,
    Construction = 12,
    Panic = 13,
}

/// Values accepted as the `kind` argument of `md_scheme_build`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdSchemeKind {
    X11 = 0,
    X12 = 1,
    X13 = 2,
    X2 = 3,
    X3 = 4,
}

pub struct MdProfile(QualityProfile);
pub struct MdRegion(DofRegion);
pub struct MdScheme(SchemeConfig);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MdStatus {
    match e {
        Error::Malformed(_) => MdStatus::Malformed,
        Error::InvalidProfile(_) => MdStatus::InvalidProfile,
        Error::Domain(_) => MdStatus::Domain,
        Error::Infeasible(_) => MdStatus::Infeasible,
        Error::WrongCase(_) => MdStatus::WrongCase,
        Error::InvalidDelta(_) => MdStatus::InvalidDelta,
        Error::Degenerate(_) => MdStatus::Degenerate,
        Error::OutOfRange(_) => MdStatus::OutOfRange,
        Error::Grid(_) => MdStatus::Grid,
        Error::Budget(_) => MdStatus::Budget,
        Error::Construction(_) => MdStatus::Construction,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MdStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            MdStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic");
            MdStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// Moves `value` into a new handle, leaving nothing allocated when `out` is null.
unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

/// Message of the last failure on this thread; empty if none. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn md_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn md_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn md_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a profile from JSON text (`{"T":…, "alpha1":[…], "beta":…}`).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_profile_from_json(json: *const c_char, out: *mut *mut MdProfile) -> MdStatus {
    guard(|| {
        if json.is_null() {
            return Err(Fail::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Error::Malformed("profile is not UTF-8".into()))?;
        let p = QualityProfile::from_json(text)?;
        put_handle(out, MdProfile(p))
    })
}

/// Builds a profile from per-slot exponents. `alpha2` may be null to copy `alpha1`.
///
/// # Safety
/// `alpha1` (and `alpha2` when non-null) must point to `slots` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_profile_new(
    alpha1: *const f64,
    alpha2: *const f64,
    slots: usize,
    beta1: f64,
    beta2: f64,
    out: *mut *mut MdProfile,
) -> MdStatus {
    guard(|| {
        let a1 = slice(alpha1, slots, "alpha1")?.to_vec();
        let a2 = if alpha2.is_null() { a1.clone() } else { slice(alpha2, slots, "alpha2")?.to_vec() };
        let p = QualityProfile::with_betas(a1, a2, beta1, beta2)?;
        put_handle(out, MdProfile(p))
    })
}

/// # Safety
/// `p` must be null or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn md_profile_free(p: *mut MdProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Block length `T`, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn md_profile_slots(p: *const MdProfile) -> usize {
    p.as_ref().map_or(0, |p| p.0.slots())
}

/// Average current exponent of `user` (1 or 2).
///
/// # Safety
/// `p` must be a live profile handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_profile_average(p: *const MdProfile, user: c_int, out: *mut f64) -> MdStatus {
    guard(|| {
        let p = get(p, "profile")?;
        let u = match user {
            1 => User::One,
            2 => User::Two,
            _ => return Err(Error::OutOfRange(format!("user {user} is not 1 or 2")).into()),
        };
        put(out, p.0.average_exponent(u), "out")
    })
}

fn region_out(r: miso_dof::Result<DofRegion>, out: *mut *mut MdRegion) -> MdStatus {
    guard(|| unsafe { put_handle(out, MdRegion(r?)) })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_region_theorem1(abar: f64, out: *mut *mut MdRegion) -> MdStatus {
    region_out(region::region_theorem1(abar), out)
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_region_theorem2(abar: f64, beta: f64, out: *mut *mut MdRegion) -> MdStatus {
    region_out(region::region_theorem2(abar, beta), out)
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_region_theorem4(abar1: f64, abar2: f64, out: *mut *mut MdRegion) -> MdStatus {
    region_out(region::region_theorem4(abar1, abar2), out)
}

/// # Safety
/// `r` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn md_region_free(r: *mut MdRegion) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn md_region_vertex_count(r: *const MdRegion) -> usize {
    r.as_ref().map_or(0, |r| r.0.vertices().len())
}

/// Vertex `index` (0-based) in counter-clockwise order starting at the origin.
///
/// # Safety
/// `r` must be a live region handle; `d1` and `d2` writable.
#[no_mangle]
pub unsafe extern "C" fn md_region_vertex(r: *const MdRegion, index: usize, d1: *mut f64, d2: *mut f64) -> MdStatus {
    guard(|| {
        let r = get(r, "region")?;
        let v = r.0.vertices();
        let p = v
            .get(index)
            .ok_or_else(|| Error::OutOfRange(format!("vertex {index} of {}", v.len())))?;
        put(d1, p.d1, "d1")?;
        put(d2, p.d2, "d2")
    })
}

/// 1 if the region is the optimal region, 0 for an inner bound or a null handle.
///
/// # Safety
/// `r` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn md_region_is_optimal(r: *const MdRegion) -> c_int {
    r.as_ref().map_or(0, |r| c_int::from(r.0.status() == RegionStatus::Optimal))
}

/// 1 if `(d1, d2)` lies in the region (tolerance 1e-9), else 0.
///
/// # Safety
/// `r` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn md_region_contains(r: *const MdRegion, d1: f64, d2: f64) -> c_int {
    r.as_ref().map_or(0, |r| c_int::from(r.0.contains(DofPoint::new(d1, d2))))
}

/// Minimum `(ᾱ, β)` for symmetric DoF `dprime`.
///
/// # Safety
/// `abar` and `beta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_solve_min_quality(dprime: f64, abar: *mut f64, beta: *mut f64) -> MdStatus {
    guard(|| {
        let q = corollary::solve_min_quality(dprime)?;
        put(abar, q.abar_min, "abar")?;
        put(beta, q.beta_min, "beta")
    })
}

/// Builds a scheme; `kind` is an `MdSchemeKind` value. Pass NaN for `delta` to use the default margin.
///
/// # Safety
/// `profile` must be a live profile handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_build(
    kind: c_int,
    profile: *const MdProfile,
    phases: usize,
    t1: f64,
    delta: f64,
    out: *mut *mut MdScheme,
) -> MdStatus {
    guard(|| {
        let p = get(profile, "profile")?;
        let kind = match kind {
            k if k == MdSchemeKind::X11 as c_int => SchemeKind::X11,
            k if k == MdSchemeKind::X12 as c_int => SchemeKind::X12,
            k if k == MdSchemeKind::X13 as c_int => SchemeKind::X13,
            k if k == MdSchemeKind::X2 as c_int => SchemeKind::X2,
            k if k == MdSchemeKind::X3 as c_int => SchemeKind::X3,
            k => return Err(Error::OutOfRange(format!("scheme kind {k}")).into()),
        };
        let opts = SchemeOptions {
            phases,
            t1,
            delta: (!delta.is_nan()).then_some(delta),
            ..SchemeOptions::default()
        };
        let cfg = SchemeConfig::build(kind, &p.0, opts)?;
        put_handle(out, MdScheme(cfg))
    })
}

/// # Safety
/// `s` must be null or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_free(s: *mut MdScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of phases, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_phase_count(s: *const MdScheme) -> usize {
    s.as_ref().map_or(0, |s| s.0.phase_count())
}

/// Duration in blocks of 1-based `phase`.
///
/// # Safety
/// `s` must be a live scheme handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_duration(s: *const MdScheme, phase: usize, out: *mut f64) -> MdStatus {
    guard(|| {
        let s = get(s, "scheme")?;
        let d = s.0.durations();
        if phase == 0 || phase > d.len() {
            return Err(Error::OutOfRange(format!("phase {phase} not in 1..={}", d.len())).into());
        }
        put(out, d[phase - 1], "out")
    })
}

/// DoF pair of the finite instance.
///
/// # Safety
/// `s` must be a live scheme handle; `d1`, `d2` writable.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_dof_finite(s: *const MdScheme, d1: *mut f64, d2: *mut f64) -> MdStatus {
    guard(|| {
        let p = get(s, "scheme")?.0.dof_finite();
        put(d1, p.d1, "d1")?;
        put(d2, p.d2, "d2")
    })
}

/// Limiting DoF pair as the phase count grows.
///
/// # Safety
/// `s` must be a live scheme handle; `d1`, `d2` writable.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_dof_limit(s: *const MdScheme, d1: *mut f64, d2: *mut f64) -> MdStatus {
    guard(|| {
        let p = get(s, "scheme")?.0.dof_limit()?;
        put(d1, p.d1, "d1")?;
        put(d2, p.d2, "d2")
    })
}

/// 1 if every phase boundary of the quantization ledger balances, else 0.
///
/// # Safety
/// `s` must be null or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_ledger_balanced(s: *const MdScheme) -> c_int {
    s.as_ref().map_or(0, |s| c_int::from(s.0.quantization_ledger().balanced()))
}

/// Full scheme as JSON; release with `md_string_free`. Null on failure.
///
/// # Safety
/// `s` must be null or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn md_scheme_to_json(s: *const MdScheme) -> *mut c_char {
    let Some(s) = s.as_ref() else {
        set_error("null pointer: scheme");
        return ptr::null_mut();
    };
    match serde_json::to_string(&s.0) {
        Ok(text) => CString::new(text).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}
