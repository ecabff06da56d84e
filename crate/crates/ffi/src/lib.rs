//! C ABI over the `kneser` crate.
//!
//! Groups and sets cross the boundary as opaque handles. Every fallible
//! call returns a [`KnStatus`]; on failure the message is available from
//! [`kn_last_error_message`] on the same thread until the next failing call.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`kn_string_free`]. Panics never unwind into C: they
//! surface as [`KnStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use kneser::engine::{certify, kneser_bound, verify, Certificate};
use kneser::parse::{parse_group_spec, parse_set_literal};
use kneser::{Error, FinAbGroup, GSet};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGroup = 4,
    TooLarge = 5,
    DomainMismatch = 6,
    EmptySet = 7,
    Precondition = 8,
    Certificate = 9,
    Internal = 10,
    Panic = 11,
}

/// A finite abelian group.
pub struct KnGroup {
    inner: FinAbGroup,
}

/// A subset of a group.
pub struct KnSet {
    inner: GSet,
}

/// Both sides of `|A+B| >= |A+K| + |B+K| - |K|`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KnBoundReport {
    /// `|A+B|`
    pub lhs: usize,
    /// `|A+K| + |B+K| - |K|`
    pub rhs: usize,
    /// `|K|`, the order of the stabilizer of `A+B`
    pub k_order: usize,
    pub holds: bool,
    pub equality: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(KnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => KnStatus::Parse,
            Error::InvalidGroup(_) | Error::InvalidSubgroup(_) => KnStatus::InvalidGroup,
            Error::TooLarge { .. } | Error::BudgetExceeded { .. } => KnStatus::TooLarge,
            Error::DomainMismatch(_) => KnStatus::DomainMismatch,
            Error::EmptySet => KnStatus::EmptySet,
            Error::Precondition(_)
            | Error::Containment(_)
            | Error::CallerOrder(_)
            | Error::InvalidArgument(_) => KnStatus::Precondition,
            Error::Certificate(_) => KnStatus::Certificate,
            Error::DescentStall | Error::ProofFalsified(_) => KnStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f`, recording any failure or panic in the thread-local slot.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KnStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            KnStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(KnStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(KnStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(KnStatus::Internal, "string contains a NUL byte".into()))
}

fn boxed_set(inner: GSet) -> *mut KnSet {
    Box::into_raw(Box::new(KnSet { inner }))
}

/// Builds `Z_{orders[0]} x ... x Z_{orders[len-1]}`.
///
/// # Safety
/// `orders` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kn_group_new(orders: *const u32, len: usize, out: *mut *mut KnGroup) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if orders.is_null() {
            return Err(null("orders"));
        }
        let orders = std::slice::from_raw_parts(orders, len);
        let inner = FinAbGroup::product(orders)?;
        *out = Box::into_raw(Box::new(KnGroup { inner }));
        Ok(())
    })
}

/// Parses a spec such as `"Z6"` or `"Z2xZ4"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kn_group_parse(spec: *const c_char, out: *mut *mut KnGroup) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let inner = parse_group_spec(str_arg(spec, "spec")?)?.build()?;
        *out = Box::into_raw(Box::new(KnGroup { inner }));
        Ok(())
    })
}

/// Order of the group, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kn_group_order(group: *const KnGroup) -> usize {
    group.as_ref().map_or(0, |g| g.inner.order())
}

/// # Safety
/// `group` must be null or a handle from this library, not yet freed.
/// Sets created in the group stay valid.
#[no_mangle]
pub unsafe extern "C" fn kn_group_free(group: *mut KnGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Parses a set literal such as `"{0,1,3}"` or `"{(0,1),(1,0)}"`.
///
/// # Safety
/// `group` must be a live handle, `literal` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_set_parse(group: *const KnGroup, literal: *const c_char, out: *mut *mut KnSet) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = handle(group, "group")?;
        let s = parse_set_literal(&g.inner, str_arg(literal, "literal")?)?;
        *out = boxed_set(s);
        Ok(())
    })
}

/// Cardinality of the set, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kn_set_len(set: *const KnSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// Writes the set literal, e.g. `"{0,3}"`. Free with [`kn_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_set_to_string(set: *const KnSet, out: *mut *mut c_char) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        *out = c_string(handle(set, "set")?.inner.to_string())?;
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kn_set_free(set: *mut KnSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// `A + B` as a new set.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_sumset(a: *const KnSet, b: *const KnSet, out: *mut *mut KnSet) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let sum = handle(a, "a")?.inner.sumset(&handle(b, "b")?.inner)?;
        *out = boxed_set(sum);
        Ok(())
    })
}

/// The stabilizer `{g : g + A = A}` as a new set.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_stabilizer(set: *const KnSet, out: *mut *mut KnSet) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let stab = handle(set, "set")?.inner.stabilizer();
        *out = boxed_set(stab.as_set().clone());
        Ok(())
    })
}

/// Evaluates the Kneser bound for nonempty `A` and `B`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_kneser_bound(a: *const KnSet, b: *const KnSet, out: *mut KnBoundReport) -> KnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let r = kneser_bound(&handle(a, "a")?.inner, &handle(b, "b")?.inner)?;
        *out = KnBoundReport {
            lhs: r.lhs,
            rhs: r.rhs,
            k_order: r.k.order(),
            holds: r.holds,
            equality: r.equality,
        };
        Ok(())
    })
}

/// Builds a certificate and writes it as JSON. Free with [`kn_string_free`].
///
/// # Safety
/// `a` and `b` must be live handles and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_certify(a: *const KnSet, b: *const KnSet, out_json: *mut *mut c_char) -> KnStatus {
    guard(|| {
        let out = out_ptr(out_json, "out_json")?;
        *out = ptr::null_mut();
        let cert = certify(&handle(a, "a")?.inner, &handle(b, "b")?.inner)?;
        *out = c_string(cert.to_json())?;
        Ok(())
    })
}

/// Replays a JSON certificate against `A` and `B`.
///
/// A malformed document is a rejection, not an error. On rejection
/// `*out_reason` receives the reason (free with [`kn_string_free`]); on
/// acceptance it is set to null. `out_reason` may itself be null.
///
/// # Safety
/// `a` and `b` must be live handles, `json` a NUL-terminated string and
/// `out_accepted` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_verify(
    a: *const KnSet,
    b: *const KnSet,
    json: *const c_char,
    out_accepted: *mut bool,
    out_reason: *mut *mut c_char,
) -> KnStatus {
    guard(|| {
        let accepted = out_ptr(out_accepted, "out_accepted")?;
        *accepted = false;
        if let Some(r) = out_reason.as_mut() {
            *r = ptr::null_mut();
        }
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        let reason = match Certificate::from_json(str_arg(json, "json")?) {
            Ok(cert) => {
                let report = verify(&cert, &a.inner, &b.inner);
                *accepted = report.accepted;
                report.reason
            }
            Err(e) => Some(e.to_string()),
        };
        if let (Some(slot), Some(reason)) = (out_reason.as_mut(), reason) {
            *slot = c_string(reason)?;
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or `""`. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version and certificate format, as a static string.
#[no_mangle]
pub extern "C" fn kn_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(kneser::cli::VERSION).expect("no NUL in version"))
        .as_ptr()
}
