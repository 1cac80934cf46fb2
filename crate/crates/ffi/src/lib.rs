//! C interface to the solver.
//!
//! Networks are opaque handles created by [`fpcp_network_parse`] and
//! released with [`fpcp_network_free`]. Every fallible call returns an
//! [`FpcpStatus`]; on failure [`fpcp_last_error`] describes the problem.
//! Strings handed out by the library are owned by the caller and must be
//! released with [`fpcp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use fpcp::engine::{solve, Network, SolveConfig, TraceEvent, ValueOrder, Verdict};
use fpcp::frontend::report::{check_report, solve_report};
use fpcp::frontend::{parse_problem, print_problem};
use fpcp::minifloat::FpFormat;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpcpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    BadFormat = 4,
    InvalidOption = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpcpVerdict {
    Sat = 0,
    Unsat = 1,
    Unknown = 2,
}

/// Search options; start from [`fpcp_solve_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FpcpSolveOptions {
    pub maxulp: bool,
    pub node_limit: u64,
    /// Seconds; zero or negative means no limit.
    pub time_limit: f64,
    pub upper_first: bool,
    /// Include every narrowing in the JSON report.
    pub trace: bool,
}

/// Opaque constraint network.
pub struct FpcpNetwork {
    net: Network,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).expect("nul removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(FpcpStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FpcpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FpcpStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            FpcpStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(FpcpStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(FpcpStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul removed").into_raw()
}

fn null(what: &str) -> Fail {
    Fail(FpcpStatus::NullArgument, format!("{what} is null"))
}

/// Description of the last failure on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn fpcp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fpcp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn fpcp_solve_options_default() -> FpcpSolveOptions {
    let d = SolveConfig::default();
    FpcpSolveOptions {
        maxulp: d.maxulp,
        node_limit: d.node_limit,
        time_limit: d.time_limit.map_or(0.0, |t| t.as_secs_f64()),
        upper_first: false,
        trace: false,
    }
}

/// Parse a problem. `format` may be null; otherwise it overrides the
/// file's `format` line.
///
/// # Safety
/// `text` and a non-null `format` must be NUL-terminated strings; `out`
/// must point to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fpcp_network_parse(
    text: *const c_char,
    format: *const c_char,
    out: *mut *mut FpcpNetwork,
) -> FpcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(text, "text")?;
        let fmt = if format.is_null() {
            None
        } else {
            let name = str_arg(format, "format")?;
            Some(
                name.parse::<FpFormat>()
                    .map_err(|e| Fail(FpcpStatus::BadFormat, e.to_string()))?,
            )
        };
        let net = parse_problem(text, fmt).map_err(|e| Fail(FpcpStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(FpcpNetwork { net }));
        Ok(())
    })
}

/// # Safety
/// `net` must be null or a handle from [`fpcp_network_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fpcp_network_free(net: *mut FpcpNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of variables, constants included; 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fpcp_network_var_count(net: *const FpcpNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.net.vars().len())
}

/// Print the network in the problem syntax.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fpcp_network_print(net: *const FpcpNetwork, out: *mut *mut c_char) -> FpcpStatus {
    guard(|| {
        let n = net.as_ref().ok_or_else(|| null("net"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = out_string(print_problem(&n.net));
        Ok(())
    })
}

/// Search for a solution. `opts` may be null for the defaults. On success
/// `verdict` is set and, when `report` is non-null, it receives the JSON
/// report.
///
/// # Safety
/// `net` must be a live handle; `verdict` writable; `opts` and `report`
/// null or valid.
#[no_mangle]
pub unsafe extern "C" fn fpcp_solve(
    net: *const FpcpNetwork,
    opts: *const FpcpSolveOptions,
    verdict: *mut FpcpVerdict,
    report: *mut *mut c_char,
) -> FpcpStatus {
    guard(|| {
        let n = net.as_ref().ok_or_else(|| null("net"))?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let o = opts.as_ref().copied().unwrap_or_else(|| fpcp_solve_options_default());
        if o.time_limit.is_nan() || o.time_limit.is_infinite() {
            return Err(Fail(FpcpStatus::InvalidOption, "time_limit must be finite".into()));
        }
        let cfg = SolveConfig {
            maxulp: o.maxulp,
            node_limit: o.node_limit,
            time_limit: (o.time_limit > 0.0).then(|| Duration::from_secs_f64(o.time_limit)),
            value_order: if o.upper_first {
                ValueOrder::UpperFirst
            } else {
                ValueOrder::LowerFirst
            },
            ..SolveConfig::default()
        };
        let mut events: Vec<TraceEvent> = Vec::new();
        let mut hook = |e: &TraceEvent| events.push(e.clone());
        let hook: Option<&mut dyn FnMut(&TraceEvent)> = if o.trace { Some(&mut hook) } else { None };
        let r = solve(&n.net, &cfg, hook);
        *verdict = match r.verdict {
            Verdict::Sat(_) => FpcpVerdict::Sat,
            Verdict::Unsat => FpcpVerdict::Unsat,
            Verdict::Unknown(_) => FpcpVerdict::Unknown,
        };
        if !report.is_null() {
            *report = out_string(solve_report(&n.net, &r, &events).to_json());
        }
        Ok(())
    })
}

/// Propagate at the root only. `consistent` is set to false when a domain
/// empties; `report` (optional) receives the JSON domains and trace.
///
/// # Safety
/// `net` must be a live handle; `consistent` writable; `report` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fpcp_check(
    net: *const FpcpNetwork,
    maxulp: bool,
    consistent: *mut bool,
    report: *mut *mut c_char,
) -> FpcpStatus {
    guard(|| {
        let n = net.as_ref().ok_or_else(|| null("net"))?;
        if consistent.is_null() {
            return Err(null("consistent"));
        }
        let rep = check_report(&n.net, maxulp);
        *consistent = rep.consistent;
        if !report.is_null() {
            *report = out_string(rep.to_json());
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fpcp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
