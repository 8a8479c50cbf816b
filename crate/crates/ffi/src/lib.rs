//! C interface to the more-or-less CP-net reasoner.
//!
//! Nets are opaque handles created by [`mlcp_net_parse`] and released with
//! [`mlcp_net_free`]. Every fallible function returns an [`MlcpStatus`]; on
//! failure, [`mlcp_last_error_message`] describes the error. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`mlcp_string_free`]. Outcomes are passed as literals such as `X=3,Y=a`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use mlcp::dominance::{dominates_in, MoreOrLessNet, SearchOptions};
use mlcp::oracle::oracle_dominates;
use mlcp::{check_more_or_less, optimize, parse_cpnet, serialize_cpnet, CpNet, Error};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlcpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed net text.
    Parse = 3,
    /// The net is cyclic or its tables do not partition the parent space.
    Validation = 4,
    /// The query needs a more-or-less net.
    NotMoreOrLess = 5,
    /// An outcome or expansion budget was exceeded.
    Resource = 6,
    /// An outcome literal does not fit the net.
    InvalidOutcome = 7,
    /// A library invariant failed.
    Internal = 8,
    /// A panic was caught at the boundary.
    Panic = 9,
}

/// Opaque net handle.
pub struct MlcpNet {
    net: CpNet,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> MlcpStatus {
    match err {
        Error::Parse { .. } | Error::Invalid(_) => MlcpStatus::Parse,
        Error::Structure(_) => MlcpStatus::Validation,
        Error::NotMoreOrLess(_) => MlcpStatus::NotMoreOrLess,
        Error::BudgetExceeded { .. } | Error::ExpansionCap { .. } | Error::TooManyCombinations { .. } => {
            MlcpStatus::Resource
        }
        Error::Outcome(_) | Error::Precondition(_) => MlcpStatus::InvalidOutcome,
        Error::NotImproving(_) | Error::NotIrreducible(_) | Error::BadRepMap(_) | Error::Invariant(_) => {
            MlcpStatus::Internal
        }
    }
}

struct Failure(MlcpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `body`, recording any error message and converting panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MlcpStatus {
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            MlcpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside the mlcp library");
            MlcpStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MlcpStatus::NullArgument, format!("`{what}` is null"))
}

/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MlcpStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

/// # Safety
/// `p` must be null or a handle from [`mlcp_net_parse`].
unsafe fn read_net<'a>(p: *const MlcpNet) -> Result<&'a CpNet, Failure> {
    p.as_ref().map(|h| &h.net).ok_or_else(|| null("net"))
}

fn write_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    let s = CString::new(value).map_err(|_| Failure(MlcpStatus::Internal, "string holds a NUL byte".into()))?;
    // SAFETY: callers check `out` for null before computing `value`.
    unsafe { *out = s.into_raw() };
    Ok(())
}

/// Parses and validates a net. On success `*out` receives a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlcp_net_parse(text: *const c_char, out: *mut *mut MlcpNet) -> MlcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let net = parse_cpnet(read_str(text, "text")?)?;
        *out = Box::into_raw(Box::new(MlcpNet { net }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `net` must be null or a handle from [`mlcp_net_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mlcp_net_free(net: *mut MlcpNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mlcp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Canonical text of the net.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlcp_net_serialize(net: *const MlcpNet, out: *mut *mut c_char) -> MlcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, serialize_cpnet(read_net(net)?))
    })
}

/// Whether every variable of the net is monotonic.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlcp_net_is_more_or_less(net: *const MlcpNet, out: *mut bool) -> MlcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = check_more_or_less(read_net(net)?).is_more_or_less;
        Ok(())
    })
}

/// Does `better` dominate `worse`? Uses the restricted search, so the net must
/// be more-or-less. `nodes_expanded` may be null.
///
/// # Safety
/// `net` must be a live handle; strings NUL-terminated; `entailed` writable;
/// `nodes_expanded` null or writable.
#[no_mangle]
pub unsafe extern "C" fn mlcp_dominates(
    net: *const MlcpNet,
    better: *const c_char,
    worse: *const c_char,
    entailed: *mut bool,
    nodes_expanded: *mut u64,
) -> MlcpStatus {
    guard(|| {
        if entailed.is_null() {
            return Err(null("entailed"));
        }
        let net = read_net(net)?;
        let better = net.parse_outcome(read_str(better, "better")?)?;
        let worse = net.parse_outcome(read_str(worse, "worse")?)?;
        let ml = MoreOrLessNet::new(net)?;
        let result = dominates_in(&ml, &better, &worse, &SearchOptions::default())?;
        *entailed = result.entailed;
        if !nodes_expanded.is_null() {
            *nodes_expanded = result.stats.nodes_expanded;
        }
        Ok(())
    })
}

/// Dominance by brute-force reachability over at most `cap` outcomes.
///
/// # Safety
/// As for [`mlcp_dominates`].
#[no_mangle]
pub unsafe extern "C" fn mlcp_oracle_dominates(
    net: *const MlcpNet,
    better: *const c_char,
    worse: *const c_char,
    cap: u64,
    entailed: *mut bool,
) -> MlcpStatus {
    guard(|| {
        if entailed.is_null() {
            return Err(null("entailed"));
        }
        let net = read_net(net)?;
        let better = net.parse_outcome(read_str(better, "better")?)?;
        let worse = net.parse_outcome(read_str(worse, "worse")?)?;
        *entailed = oracle_dominates(net, &better, &worse, cap)?;
        Ok(())
    })
}

/// Best completion of a partial assignment (`given` may be null or empty).
/// `*out` receives the outcome literal.
///
/// # Safety
/// `net` must be a live handle; `given` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlcp_optimize(net: *const MlcpNet, given: *const c_char, out: *mut *mut c_char) -> MlcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let net = read_net(net)?;
        let partial = if given.is_null() {
            vec![None; net.len()]
        } else {
            let text = read_str(given, "given")?;
            if text.trim().is_empty() {
                vec![None; net.len()]
            } else {
                net.parse_assignment(text)?
            }
        };
        let best = optimize(net, &partial)?;
        write_string(out, net.format_outcome(&best))
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn mlcp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
