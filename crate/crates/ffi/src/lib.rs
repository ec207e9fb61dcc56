//! C interface to `witsets`.
//!
//! Codes and set families are handed out as opaque pointers and released
//! with their `*_free` function. Fallible calls return a [`WsStatus`] and
//! write results through out-pointers; on failure a message is kept per
//! thread and can be read with [`ws_last_error`]. Strings returned by the
//! library are released with [`ws_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use num_traits::ToPrimitive;

use witsets::analysis::{mean_stats, min_witness, SearchMode};
use witsets::bounds::bounds_report;
use witsets::cache::ExactValueCache;
use witsets::constructions::{from_family, sphere, steiner_3_4_8, steiner_5_6_12, two_part_sphere, SetFamily};
use witsets::io::{to_json, CodeFile};
use witsets::solver::{f_cw_exact, f_exact, Limits};
use witsets::{has_w_witness_property, Code, WitnessError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    TooLarge = 4,
    Internal = 5,
}

/// Opaque code handle.
pub struct WsCode(Code);

/// Opaque set family handle.
pub struct WsFamily(SetFamily);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: WitnessError) -> WsStatus {
    let status = match e {
        WitnessError::Parse { .. } => WsStatus::Parse,
        WitnessError::TooLarge(_) => WsStatus::TooLarge,
        WitnessError::Certificate(_) | WitnessError::Io(_) => WsStatus::Internal,
        _ => WsStatus::InvalidArgument,
    };
    set_error(e.to_string());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), WsStatus>) -> WsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            WsStatus::Internal
        }
    }
}

fn null() -> WsStatus {
    set_error("null pointer argument".into());
    WsStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, WsStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), WsStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, WsStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| {
        set_error("string contains NUL".into());
        WsStatus::Internal
    })
}

fn new_code(code: Code) -> *mut WsCode {
    Box::into_raw(Box::new(WsCode(code)))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ws_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a code file (header `n <length>`, one word per line).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_code_parse(text: *const c_char, out: *mut *mut WsCode) -> WsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not UTF-8".into());
            WsStatus::Parse
        })?;
        let code = CodeFile::parse(s).and_then(|f| f.to_code()).map_err(fail)?;
        write(out, new_code(code))
    })
}

/// Builds a code from `count` words; bit `i - 1` of a word is coordinate `i`.
///
/// # Safety
/// `bits` must point to `count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_code_from_bits(n: u32, bits: *const u64, count: usize, out: *mut *mut WsCode) -> WsStatus {
    guard(|| {
        let words = if count == 0 {
            &[][..]
        } else if bits.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(bits, count)
        };
        let code = Code::from_bits(n as usize, words.iter().copied()).map_err(fail)?;
        if code.size() != count {
            return Err(fail(WitnessError::InvalidArgument("duplicate words".into())));
        }
        write(out, new_code(code))
    })
}

/// # Safety
/// `code` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ws_code_free(code: *mut WsCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of codewords, 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_code_size(code: *const WsCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.size())
}

/// Word length, 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_code_length(code: *const WsCode) -> u32 {
    code.as_ref().map_or(0, |c| c.0.len() as u32)
}

/// The `index`-th word in sorted order.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_code_word(code: *const WsCode, index: usize, out: *mut u64) -> WsStatus {
    guard(|| {
        let c = &deref(code)?.0;
        let word = c
            .words()
            .get(index)
            .ok_or_else(|| fail(WitnessError::InvalidArgument(format!("index {index} out of range"))))?;
        write(out, word.bits())
    })
}

/// Code file text; release with `ws_string_free`.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_code_render(code: *const WsCode, out: *mut *mut c_char) -> WsStatus {
    guard(|| {
        let text = CodeFile::from_code(&deref(code)?.0).render();
        write(out, into_c_string(text)?)
    })
}

/// All words of weight `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_sphere(n: u32, k: u32, out: *mut *mut WsCode) -> WsStatus {
    guard(|| write(out, new_code(sphere(n as usize, k as usize).map_err(fail)?)))
}

/// The two-part construction with a sphere of weight `w - t` words.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_two_part_sphere(n: u32, w: u32, t: u32, out: *mut *mut WsCode) -> WsStatus {
    guard(|| {
        let tp = two_part_sphere(n as usize, w as usize, t as usize).map_err(fail)?;
        write(out, new_code(tp.construction.code))
    })
}

#[no_mangle]
pub extern "C" fn ws_steiner_3_4_8() -> *mut WsFamily {
    Box::into_raw(Box::new(WsFamily(steiner_3_4_8())))
}

#[no_mangle]
pub extern "C" fn ws_steiner_5_6_12() -> *mut WsFamily {
    Box::into_raw(Box::new(WsFamily(steiner_5_6_12())))
}

/// # Safety
/// `family` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ws_family_free(family: *mut WsFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// # Safety
/// `family` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_family_block_count(family: *const WsFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.blocks().len())
}

/// The family code: every block together with the words just below it.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_family_code(family: *const WsFamily, out: *mut *mut WsCode) -> WsStatus {
    guard(|| {
        let code = from_family(&deref(family)?.0).map_err(fail)?;
        write(out, new_code(code))
    })
}

/// Whether every codeword has a witness of size `w`.
///
/// # Safety
/// `code` must be a live handle; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_verify(code: *const WsCode, w: u32, holds: *mut bool) -> WsStatus {
    guard(|| {
        let verdict = has_w_witness_property(&deref(code)?.0, w as usize);
        write(holds, verdict.holds())
    })
}

/// A minimum witness of the `index`-th word (sorted order) as a bit mask.
///
/// # Safety
/// `code` must be a live handle; `mask` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_min_witness(code: *const WsCode, index: usize, mask: *mut u64) -> WsStatus {
    guard(|| {
        let c = &deref(code)?.0;
        let word = c
            .words()
            .get(index)
            .ok_or_else(|| fail(WitnessError::InvalidArgument(format!("index {index} out of range"))))?;
        let win = min_witness(c, word, SearchMode::Exact).map_err(fail)?;
        write(mask, win.mask())
    })
}

/// gamma(C, w) as a reduced fraction.
///
/// # Safety
/// `code` must be a live handle; `numerator` and `denominator` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_gamma(code: *const WsCode, w: u32, numerator: *mut u64, denominator: *mut u64) -> WsStatus {
    guard(|| {
        let stats = mean_stats(&deref(code)?.0, w as usize).map_err(fail)?;
        let too_big = || fail(WitnessError::TooLarge("gamma does not fit 64 bits".into()));
        let num = stats.gamma.numer().to_u64().ok_or_else(too_big)?;
        let den = stats.gamma.denom().to_u64().ok_or_else(too_big)?;
        write(numerator, num)?;
        write(denominator, den)
    })
}

/// Bound report for f(n,w) as JSON; release with `ws_string_free`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_bounds_json(n: u32, w: u32, out: *mut *mut c_char) -> WsStatus {
    guard(|| {
        let report = bounds_report(n as usize, w as usize, &ExactValueCache::new()).map_err(fail)?;
        write(out, into_c_string(to_json(&report).map_err(fail)?)?)
    })
}

/// Solves f(n,w), or f(n,w,k) when `k >= 0`, as JSON. A positive
/// `time_limit_seconds` bounds the search, in which case the result may be
/// a lower bound.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_solve_json(
    n: u32,
    w: u32,
    k: i32,
    time_limit_seconds: f64,
    out: *mut *mut c_char,
) -> WsStatus {
    guard(|| {
        let limits = Limits {
            time_limit: (time_limit_seconds > 0.0)
                .then(|| Duration::try_from_secs_f64(time_limit_seconds).ok())
                .flatten(),
            ..Limits::default()
        };
        let r = if k >= 0 {
            f_cw_exact(n as usize, w as usize, k as usize, &limits)
        } else {
            f_exact(n as usize, w as usize, &limits)
        }
        .map_err(fail)?;
        write(out, into_c_string(to_json(&r).map_err(fail)?)?)
    })
}
