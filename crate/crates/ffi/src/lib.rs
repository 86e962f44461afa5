//! C interface over the core toolkit. Handles are opaque pointers created
//! and released by this library; every fallible call returns a
//! [`FpcycStatus`] and leaves a message for [`fpcyc_last_error_message`] on
//! failure. Strings returned through `char**` outputs are owned by the
//! caller and released with [`fpcyc_string_free`]; handles with their
//! matching `*_free`.
//!
//! The build script writes the matching header to `include/fpcyc.h`.

use fpcyc::aut::{self, Automorphism};
use fpcyc::invariants::{conjugacy_census, fa_case_certificate};
use fpcyc::{Error, Order, Signature, Word};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Outcome of a call. Anything but `Ok` leaves a message for
/// [`fpcyc_last_error_message`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FpcycStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A word, signature, or automorphism string failed to parse.
    ParseError = 3,
    /// Structurally invalid input: bad index, bad orders, not an
    /// automorphism, mismatched signatures, oversized word.
    InvalidInput = 4,
    /// The operation's hypothesis does not hold for this input.
    HypothesisNotMet = 5,
    /// The operation does not support this input shape.
    Unsupported = 6,
}

pub struct FpcycSignature(Signature);
pub struct FpcycWord(Word);
pub struct FpcycAut(Automorphism);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn record_error(message: String, status: FpcycStatus) -> FpcycStatus {
    let message = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a nul byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    status
}

fn record(err: Error) -> FpcycStatus {
    let status = match &err {
        Error::Parse { .. } => FpcycStatus::ParseError,
        Error::IndexOutOfRange { .. }
        | Error::InvalidSignature(_)
        | Error::InvalidAutomorphism(_)
        | Error::WordTooLong { .. }
        | Error::SignatureMismatch(..) => FpcycStatus::InvalidInput,
        Error::Hypothesis(_) => FpcycStatus::HypothesisNotMet,
        Error::Unsupported(_) | Error::InvalidTree(_) => FpcycStatus::Unsupported,
    };
    record_error(err.to_string(), status)
}

fn null_pointer() -> FpcycStatus {
    record_error("null pointer argument".into(), FpcycStatus::NullPointer)
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, FpcycStatus> {
    if text.is_null() {
        return Err(null_pointer());
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        record_error(
            "string argument is not valid UTF-8".into(),
            FpcycStatus::InvalidUtf8,
        )
    })
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> FpcycStatus {
    if out.is_null() {
        return null_pointer();
    }
    *out = Box::into_raw(Box::new(value));
    FpcycStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> FpcycStatus {
    if out.is_null() {
        return null_pointer();
    }
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            FpcycStatus::Ok
        }
        Err(_) => record_error(
            "output contained a nul byte".into(),
            FpcycStatus::Unsupported,
        ),
    }
}

/// Copies the message of the most recent failure on this thread; null if
/// every call so far succeeded. The caller frees the copy.
#[no_mangle]
pub extern "C" fn fpcyc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the signature (n_1, ..., n_m) from `len` factor orders, each at
/// least 2.
///
/// # Safety
/// `orders` must point to `len` readable u32 values; `out` must be a valid
/// output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_signature_new(
    orders: *const u32,
    len: usize,
    out: *mut *mut FpcycSignature,
) -> FpcycStatus {
    if orders.is_null() {
        return null_pointer();
    }
    let orders = std::slice::from_raw_parts(orders, len).to_vec();
    match Signature::new(orders) {
        Ok(sig) => write_out(out, FpcycSignature(sig)),
        Err(e) => record(e),
    }
}

/// Parses the rendering `2,2,3`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_signature_parse(
    text: *const c_char,
    out: *mut *mut FpcycSignature,
) -> FpcycStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match text.parse::<Signature>() {
        Ok(sig) => write_out(out, FpcycSignature(sig)),
        Err(e) => record(e),
    }
}

/// # Safety
/// `sig` must come from this library and not been freed before. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_signature_free(sig: *mut FpcycSignature) {
    if !sig.is_null() {
        drop(Box::from_raw(sig));
    }
}

unsafe fn deref<'a, T>(ptr: *const T) -> Result<&'a T, FpcycStatus> {
    ptr.as_ref().ok_or_else(null_pointer)
}

/// Parses a word over the signature: `e`, or `x<i>^<e>` syllables joined
/// by `*`, exponent `^1` optional.
///
/// # Safety
/// `sig` must be a live signature handle, `text` a nul-terminated string,
/// `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_parse(
    sig: *const FpcycSignature,
    text: *const c_char,
    out: *mut *mut FpcycWord,
) -> FpcycStatus {
    let sig = match deref(sig) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match Word::parse(&sig.0, text) {
        Ok(w) => write_out(out, FpcycWord(w)),
        Err(e) => record(e),
    }
}

/// # Safety
/// `sig` must be a live signature handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_identity(
    sig: *const FpcycSignature,
    out: *mut *mut FpcycWord,
) -> FpcycStatus {
    match deref(sig) {
        Ok(sig) => write_out(out, FpcycWord(Word::identity(&sig.0))),
        Err(status) => status,
    }
}

/// Writes the normal form of `left * right`.
///
/// # Safety
/// `left` and `right` must be live word handles, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_multiply(
    left: *const FpcycWord,
    right: *const FpcycWord,
    out: *mut *mut FpcycWord,
) -> FpcycStatus {
    let (left, right) = match (deref(left), deref(right)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match left.0.multiply(&right.0) {
        Ok(w) => write_out(out, FpcycWord(w)),
        Err(e) => record(e),
    }
}

/// # Safety
/// `word` must be a live word handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_invert(
    word: *const FpcycWord,
    out: *mut *mut FpcycWord,
) -> FpcycStatus {
    match deref(word) {
        Ok(w) => write_out(out, FpcycWord(w.0.invert())),
        Err(status) => status,
    }
}

/// Writes the element's order: `*finite = true` and the order itself, or
/// `*finite = false` and 0 for infinite order.
///
/// # Safety
/// `word` must be a live word handle; `finite` and `order` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_order(
    word: *const FpcycWord,
    finite: *mut bool,
    order: *mut u64,
) -> FpcycStatus {
    let w = match deref(word) {
        Ok(w) => w,
        Err(status) => return status,
    };
    if finite.is_null() || order.is_null() {
        return null_pointer();
    }
    match w.0.order() {
        Order::Finite(k) => {
            *finite = true;
            *order = k;
        }
        Order::Infinite => {
            *finite = false;
            *order = 0;
        }
    }
    FpcycStatus::Ok
}

/// # Safety
/// `word` must be a live word handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_is_identity(
    word: *const FpcycWord,
    out: *mut bool,
) -> FpcycStatus {
    let w = match deref(word) {
        Ok(w) => w,
        Err(status) => return status,
    };
    if out.is_null() {
        return null_pointer();
    }
    *out = w.0.is_identity();
    FpcycStatus::Ok
}

/// Decides conjugacy of two words over the same signature.
///
/// # Safety
/// `left` and `right` must be live word handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_is_conjugate(
    left: *const FpcycWord,
    right: *const FpcycWord,
    out: *mut bool,
) -> FpcycStatus {
    let (left, right) = match (deref(left), deref(right)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if out.is_null() {
        return null_pointer();
    }
    match left.0.is_conjugate(&right.0) {
        Ok(answer) => {
            *out = answer;
            FpcycStatus::Ok
        }
        Err(e) => record(e),
    }
}

/// Writes the normal form rendering, `e` or `x1^2*x2^1`.
///
/// # Safety
/// `word` must be a live word handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_to_string(
    word: *const FpcycWord,
    out: *mut *mut c_char,
) -> FpcycStatus {
    match deref(word) {
        Ok(w) => write_string(out, w.0.to_string()),
        Err(status) => status,
    }
}

/// # Safety
/// `word` must come from this library and not been freed before. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_word_free(word: *mut FpcycWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Parses an automorphism expression: `factor:2,1`, `perm:(1 2)`,
/// `pc:i,j`, or `*`-compositions applied left to right.
///
/// # Safety
/// `sig` must be a live signature handle, `text` a nul-terminated string,
/// `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_aut_parse(
    sig: *const FpcycSignature,
    text: *const c_char,
    out: *mut *mut FpcycAut,
) -> FpcycStatus {
    let sig = match deref(sig) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match aut::parse(&sig.0, text) {
        Ok(f) => write_out(out, FpcycAut(f)),
        Err(e) => record(e),
    }
}

/// # Safety
/// `f` must be a live automorphism handle, `word` a live word handle,
/// `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_aut_apply(
    f: *const FpcycAut,
    word: *const FpcycWord,
    out: *mut *mut FpcycWord,
) -> FpcycStatus {
    let (f, w) = match (deref(f), deref(word)) {
        (Ok(f), Ok(w)) => (f, w),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match f.0.apply(&w.0) {
        Ok(image) => write_out(out, FpcycWord(image)),
        Err(e) => record(e),
    }
}

/// Writes `f` after `g`, the map sending w to f(g(w)).
///
/// # Safety
/// `f` and `g` must be live automorphism handles, `out` a valid output
/// slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_aut_compose(
    f: *const FpcycAut,
    g: *const FpcycAut,
    out: *mut *mut FpcycAut,
) -> FpcycStatus {
    let (f, g) = match (deref(f), deref(g)) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match f.0.compose(&g.0) {
        Ok(h) => write_out(out, FpcycAut(h)),
        Err(e) => record(e),
    }
}

/// # Safety
/// `f` must be a live automorphism handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_aut_inverse(
    f: *const FpcycAut,
    out: *mut *mut FpcycAut,
) -> FpcycStatus {
    let f = match deref(f) {
        Ok(f) => f,
        Err(status) => return status,
    };
    match f.0.inverse() {
        Ok(g) => write_out(out, FpcycAut(g)),
        Err(e) => record(e),
    }
}

/// Writes the image list `x1 -> ...; x2 -> ...`.
///
/// # Safety
/// `f` must be a live automorphism handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_aut_to_string(
    f: *const FpcycAut,
    out: *mut *mut c_char,
) -> FpcycStatus {
    match deref(f) {
        Ok(f) => write_string(out, f.0.to_string()),
        Err(status) => status,
    }
}

/// # Safety
/// `f` must come from this library and not been freed before. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_aut_free(f: *mut FpcycAut) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Writes the conjugacy census line, e.g. `c(2)=2 c(4)=2`.
///
/// # Safety
/// `sig` must be a live signature handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_census_summary(
    sig: *const FpcycSignature,
    out: *mut *mut c_char,
) -> FpcycStatus {
    match deref(sig) {
        Ok(sig) => write_string(out, conjugacy_census(&sig.0).summary()),
        Err(status) => status,
    }
}

/// Writes the per-pair fixed-point certificate as JSON. Requires every
/// order to occur at least four times.
///
/// # Safety
/// `sig` must be a live signature handle, `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_fa_certificate_json(
    sig: *const FpcycSignature,
    out: *mut *mut c_char,
) -> FpcycStatus {
    let sig = match deref(sig) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match fa_case_certificate(&sig.0) {
        Ok(cert) => {
            let json = serde_json::to_string(&cert).expect("certificates serialize");
            write_string(out, json)
        }
        Err(e) => record(e),
    }
}

/// Runs the defining-relation sweep for the standard generating set,
/// writes the report text, and sets `*all_pass`.
///
/// # Safety
/// `sig` must be a live signature handle; `all_pass` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fpcyc_verify_relations(
    sig: *const FpcycSignature,
    all_pass: *mut bool,
    out: *mut *mut c_char,
) -> FpcycStatus {
    let sig = match deref(sig) {
        Ok(s) => s,
        Err(status) => return status,
    };
    if all_pass.is_null() {
        return null_pointer();
    }
    match fpcyc::aut::verify::verify_generator_relations(&sig.0) {
        Ok(report) => {
            *all_pass = report.all_pass();
            write_string(out, report.to_string())
        }
        Err(e) => record(e),
    }
}
