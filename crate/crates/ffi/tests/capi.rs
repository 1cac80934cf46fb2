use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fpcp_ffi::*;

const ABSORB: &str = "format binary32\nvar x\nconst y = 1.0e12\nvar z\nx > 0.0\nz = x add y\nz == y\n";

fn parse(text: &str, fmt: Option<&str>) -> (FpcpStatus, *mut FpcpNetwork) {
    let t = CString::new(text).unwrap();
    let f = fmt.map(|f| CString::new(f).unwrap());
    let mut net = ptr::null_mut();
    let st = unsafe { fpcp_network_parse(t.as_ptr(), f.as_ref().map_or(ptr::null(), |f| f.as_ptr()), &mut net) };
    (st, net)
}

fn last_error() -> String {
    let p = fpcp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    fpcp_string_free(s);
    out
}

#[test]
fn solve_round_trip() {
    let (st, net) = parse(ABSORB, None);
    assert_eq!(st, FpcpStatus::Ok);
    assert!(fpcp_last_error().is_null());
    unsafe {
        assert_eq!(fpcp_network_var_count(net), 3);
        let mut opts = fpcp_solve_options_default();
        opts.upper_first = true;
        let mut v = FpcpVerdict::Unknown;
        let mut rep = ptr::null_mut();
        assert_eq!(fpcp_solve(net, &opts, &mut v, &mut rep), FpcpStatus::Ok);
        assert_eq!(v, FpcpVerdict::Sat);
        let json = take(rep);
        assert!(json.contains("\"verdict\": \"sat\""));
        assert!(json.contains("1.11111111111111111111111e2^14"));

        let mut printed = ptr::null_mut();
        assert_eq!(fpcp_network_print(net, &mut printed), FpcpStatus::Ok);
        let text = take(printed);
        let (st, again) = parse(&text, None);
        assert_eq!(st, FpcpStatus::Ok);
        assert_eq!(fpcp_network_var_count(again), 3);
        fpcp_network_free(again);
        fpcp_network_free(net);
    }
}

#[test]
fn verdict_codes_and_check() {
    let (_, net) = parse(
        "format tiny\nvar x in [0, +inf]\nconst two = 2\nvar s\ns = x mul x\ns == two\n",
        None,
    );
    unsafe {
        let mut v = FpcpVerdict::Sat;
        assert_eq!(fpcp_solve(net, ptr::null(), &mut v, ptr::null_mut()), FpcpStatus::Ok);
        assert_eq!(v, FpcpVerdict::Unsat);

        let mut opts = fpcp_solve_options_default();
        opts.node_limit = 1;
        let (_, big) = parse(
            "var x in [0, +inf]\nconst two = 2\nvar s\ns = x mul x\ns == two\n",
            Some("binary32"),
        );
        assert_eq!(fpcp_solve(big, &opts, &mut v, ptr::null_mut()), FpcpStatus::Ok);
        assert_eq!(v, FpcpVerdict::Unknown);

        let mut ok = false;
        let mut rep = ptr::null_mut();
        assert_eq!(fpcp_check(net, true, &mut ok, &mut rep), FpcpStatus::Ok);
        assert!(take(rep).contains("\"consistent\""));
        fpcp_network_free(big);
        fpcp_network_free(net);
    }
}

#[test]
fn errors_set_status_and_message() {
    let (st, net) = parse("var x\ny = x add x\n", None);
    assert_eq!(st, FpcpStatus::ParseError);
    assert!(net.is_null());
    assert_eq!(last_error(), "2:1: unknown variable `y`");

    let (st, _) = parse("var x", Some("binary13"));
    assert_eq!(st, FpcpStatus::BadFormat);

    let mut out = ptr::null_mut();
    let st = unsafe { fpcp_network_parse(ptr::null(), ptr::null(), &mut out) };
    assert_eq!(st, FpcpStatus::NullArgument);
    assert!(last_error().contains("text"));

    let bad = [0xffu8, 0];
    let st = unsafe { fpcp_network_parse(bad.as_ptr().cast(), ptr::null(), &mut out) };
    assert_eq!(st, FpcpStatus::InvalidUtf8);

    let mut v = FpcpVerdict::Sat;
    assert_eq!(
        unsafe { fpcp_solve(ptr::null(), ptr::null(), &mut v, ptr::null_mut()) },
        FpcpStatus::NullArgument
    );

    let (_, net) = parse("var x", None);
    let mut opts = fpcp_solve_options_default();
    opts.time_limit = f64::NAN;
    unsafe {
        assert_eq!(
            fpcp_solve(net, &opts, &mut v, ptr::null_mut()),
            FpcpStatus::InvalidOption
        );
        fpcp_network_free(net);
        // Null handles are accepted by the release functions.
        fpcp_network_free(ptr::null_mut());
        fpcp_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(fpcp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fpcp.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "fpcp_network_parse",
        "fpcp_solve",
        "fpcp_check",
        "fpcp_last_error",
        "FPCP_STATUS_PARSE_ERROR",
    ] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(st) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(st.success());
}
