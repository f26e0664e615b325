//! C ABI over the `slstar` crate.
//!
//! Every fallible call returns an [`SlstarStatus`]; on failure the message is
//! available from [`slstar_last_error`] on the same thread. Handles are opaque
//! and owned by the caller, who releases them with the matching `_free`.
//! Strings returned through `char **` are released with [`slstar_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{SystemTime, UNIX_EPOCH};

use slstar::harness::{experiments, Verdict};
use slstar::sl_star::{self, BlockMatrix};
use slstar::{euclid, Element, Error, Ring};

/// Result codes. Zero is success; each library error has its own code.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlstarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameters = 4,
    DescriptorMismatch = 5,
    NotUnit = 6,
    NotSymmetric = 7,
    InfiniteRing = 8,
    Unsupported = 9,
    NotCoprime = 10,
    SymmetryViolation = 11,
    SearchExhausted = 12,
    PostconditionViolation = 13,
    WrongCharacteristic = 14,
    NotStarEuclidean = 15,
    HypothesesNotMet = 16,
    StepExists = 17,
    NoUnitEntry = 18,
    VerificationFailed = 19,
    NotGlStar = 20,
    NotSlStar = 21,
    CapExceeded = 22,
    DecompositionFailed = 23,
    TailUnsolved = 24,
    Usage = 25,
    Io = 26,
    Panic = 99,
}

/// Outcome of an experiment run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlstarVerdict {
    Pass = 0,
    Refusal = 1,
    Fail = 2,
}

/// A ring with involution.
pub struct SlstarRing {
    inner: Ring,
}

/// An element bound to its ring.
pub struct SlstarElement {
    inner: Element,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SlstarStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Parse { .. } => SlstarStatus::Parse,
            Error::InvalidParameters(_) => SlstarStatus::InvalidParameters,
            Error::DescriptorMismatch { .. } => SlstarStatus::DescriptorMismatch,
            Error::NotUnit => SlstarStatus::NotUnit,
            Error::NotSymmetric => SlstarStatus::NotSymmetric,
            Error::InfiniteRing(_) => SlstarStatus::InfiniteRing,
            Error::Unsupported(_) => SlstarStatus::Unsupported,
            Error::NotCoprime => SlstarStatus::NotCoprime,
            Error::SymmetryViolation => SlstarStatus::SymmetryViolation,
            Error::SearchExhausted(_) => SlstarStatus::SearchExhausted,
            Error::PostconditionViolation(_) => SlstarStatus::PostconditionViolation,
            Error::WrongCharacteristic => SlstarStatus::WrongCharacteristic,
            Error::NotStarEuclidean(_) => SlstarStatus::NotStarEuclidean,
            Error::HypothesesNotMet(_) => SlstarStatus::HypothesesNotMet,
            Error::StepExists(_) => SlstarStatus::StepExists,
            Error::NoUnitEntry => SlstarStatus::NoUnitEntry,
            Error::VerificationFailed(_) => SlstarStatus::VerificationFailed,
            Error::NotGLStar => SlstarStatus::NotGlStar,
            Error::NotSLStar(_) => SlstarStatus::NotSlStar,
            Error::CapExceeded(_) => SlstarStatus::CapExceeded,
            Error::DecompositionFailed(_) => SlstarStatus::DecompositionFailed,
            Error::TailUnsolved(_) => SlstarStatus::TailUnsolved,
            Error::Usage(_) => SlstarStatus::Usage,
            Error::Io(_) => SlstarStatus::Io,
        };
        Failure(code, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|l| *l.borrow_mut() = c);
}

/// Runs `f`, recording its error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SlstarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SlstarStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            SlstarStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(SlstarStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(SlstarStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(SlstarStatus::InvalidUtf8, "interior NUL".into()))?;
    put(out, c.into_raw())
}

fn element_box(e: Element) -> *mut SlstarElement {
    Box::into_raw(Box::new(SlstarElement { inner: e }))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn slstar_last_error() -> *const c_char {
    LAST_ERROR.with(|l| l.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn slstar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string returned through a `char **` out parameter.
#[no_mangle]
pub unsafe extern "C" fn slstar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a ring descriptor such as `Mat(2,GF(3))`.
///
/// # Safety
/// `desc` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_ring_parse(desc: *const c_char, out: *mut *mut SlstarRing) -> SlstarStatus {
    guard(|| {
        let ring = Ring::parse(text(desc)?)?;
        put(out, Box::into_raw(Box::new(SlstarRing { inner: ring })))
    })
}

/// # Safety
/// `ring` is null or a handle from [`slstar_ring_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn slstar_ring_free(ring: *mut SlstarRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Canonical descriptor of `ring`.
///
/// # Safety
/// `ring` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_ring_descriptor(ring: *const SlstarRing, out: *mut *mut c_char) -> SlstarStatus {
    guard(|| put_string(out, borrow(ring)?.inner.to_string()))
}

/// Number of elements; fails with `InfiniteRing` for infinite rings.
///
/// # Safety
/// `ring` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_ring_size(ring: *const SlstarRing, out: *mut u64) -> SlstarStatus {
    guard(|| {
        let r = &borrow(ring)?.inner;
        let n = r.size().ok_or_else(|| Error::InfiniteRing(r.to_string()))?;
        put(out, n)
    })
}

/// Parses an element literal of `ring`.
///
/// # Safety
/// `ring` is a live handle; `literal` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_parse(
    ring: *const SlstarRing,
    literal: *const c_char,
    out: *mut *mut SlstarElement,
) -> SlstarStatus {
    guard(|| {
        let e = Element::parse(&borrow(ring)?.inner, text(literal)?)?;
        put(out, element_box(e))
    })
}

/// # Safety
/// `x` is null or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_free(x: *mut SlstarElement) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Canonical literal of `x`.
///
/// # Safety
/// `x` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_format(x: *const SlstarElement, out: *mut *mut c_char) -> SlstarStatus {
    guard(|| put_string(out, borrow(x)?.inner.to_string()))
}

/// Writes true when `x` and `y` are the same element of the same ring.
///
/// # Safety
/// `x`, `y` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_equal(
    x: *const SlstarElement,
    y: *const SlstarElement,
    out: *mut bool,
) -> SlstarStatus {
    guard(|| put(out, borrow(x)?.inner == borrow(y)?.inner))
}

/// # Safety
/// `x`, `y` are live handles of the same ring; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_add(
    x: *const SlstarElement,
    y: *const SlstarElement,
    out: *mut *mut SlstarElement,
) -> SlstarStatus {
    guard(|| put(out, element_box(borrow(x)?.inner.add(&borrow(y)?.inner)?)))
}

/// # Safety
/// `x`, `y` are live handles of the same ring; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_sub(
    x: *const SlstarElement,
    y: *const SlstarElement,
    out: *mut *mut SlstarElement,
) -> SlstarStatus {
    guard(|| put(out, element_box(borrow(x)?.inner.sub(&borrow(y)?.inner)?)))
}

/// # Safety
/// `x`, `y` are live handles of the same ring; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_mul(
    x: *const SlstarElement,
    y: *const SlstarElement,
    out: *mut *mut SlstarElement,
) -> SlstarStatus {
    guard(|| put(out, element_box(borrow(x)?.inner.mul(&borrow(y)?.inner)?)))
}

/// The involution `x*`.
///
/// # Safety
/// `x` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_involute(x: *const SlstarElement, out: *mut *mut SlstarElement) -> SlstarStatus {
    guard(|| put(out, element_box(borrow(x)?.inner.involute())))
}

/// Two-sided inverse; fails with `NotUnit`.
///
/// # Safety
/// `x` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_invert(x: *const SlstarElement, out: *mut *mut SlstarElement) -> SlstarStatus {
    guard(|| put(out, element_box(borrow(x)?.inner.try_invert()?)))
}

/// # Safety
/// `x` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_is_unit(x: *const SlstarElement, out: *mut bool) -> SlstarStatus {
    guard(|| put(out, borrow(x)?.inner.is_unit()))
}

/// # Safety
/// `x` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_element_is_symmetric(x: *const SlstarElement, out: *mut bool) -> SlstarStatus {
    guard(|| put(out, borrow(x)?.inner.is_symmetric()))
}

/// First step `a = s c + r` of a verified division chain, with `s`
/// symmetric; `steps` receives the chain length.
///
/// # Safety
/// `a`, `c` are live handles of the same ring; all out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_divide(
    a: *const SlstarElement,
    c: *const SlstarElement,
    s_out: *mut *mut SlstarElement,
    r_out: *mut *mut SlstarElement,
    steps: *mut usize,
) -> SlstarStatus {
    guard(|| {
        let (a, c) = (&borrow(a)?.inner, &borrow(c)?.inner);
        if s_out.is_null() || r_out.is_null() || steps.is_null() {
            return Err(null());
        }
        if a.ring() != c.ring() {
            return Err(Error::DescriptorMismatch { left: a.ring().to_string(), right: c.ring().to_string() }.into());
        }
        let ring = a.ring();
        let chain = euclid::divide(ring, a.value(), c.value())?;
        let first = &chain.steps[0];
        let s = Element::new(ring, first.s.clone())?;
        let r = Element::new(ring, first.r.clone())?;
        put(steps, chain.len())?;
        put(s_out, element_box(s))?;
        put(r_out, element_box(r))
    })
}

/// Writes whether the block matrix literal `g` lies in `SL_*(2, ring)`.
///
/// # Safety
/// `ring` is a live handle; `g` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_sl_check(ring: *const SlstarRing, g: *const c_char, out: *mut bool) -> SlstarStatus {
    guard(|| {
        let r = &borrow(ring)?.inner;
        let g = BlockMatrix::parse(r, text(g)?)?;
        put(out, sl_star::is_sl_star(r, &g))
    })
}

/// Verified Bruhat word of the block matrix literal `g`.
///
/// # Safety
/// `ring` is a live handle; `g` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_sl_factor(ring: *const SlstarRing, g: *const c_char, out: *mut *mut c_char) -> SlstarStatus {
    guard(|| {
        let r = &borrow(ring)?.inner;
        let g = BlockMatrix::parse(r, text(g)?)?;
        put_string(out, sl_star::factor(r, &g)?.format(r))
    })
}

/// Runs a named experiment and returns its rendered report.
///
/// # Safety
/// `name` is a NUL-terminated string; out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn slstar_experiment_run(
    name: *const c_char,
    seed: u64,
    verdict: *mut SlstarVerdict,
    report: *mut *mut c_char,
) -> SlstarStatus {
    guard(|| {
        if verdict.is_null() || report.is_null() {
            return Err(null());
        }
        let rep = experiments::run(text(name)?, seed)?;
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        put(
            verdict,
            match rep.verdict {
                Verdict::Pass => SlstarVerdict::Pass,
                Verdict::Refusal => SlstarVerdict::Refusal,
                Verdict::Fail => SlstarVerdict::Fail,
            },
        )?;
        put_string(report, rep.render(ts))
    })
}

/// Number of available experiments.
#[no_mangle]
pub extern "C" fn slstar_experiment_count() -> usize {
    experiments::EXPERIMENTS.len()
}

/// Name of experiment `i`, or null when out of range. The string is owned by
/// the caller.
#[no_mangle]
pub extern "C" fn slstar_experiment_name(i: usize) -> *mut c_char {
    experiments::EXPERIMENTS
        .get(i)
        .and_then(|n| CString::new(*n).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}
