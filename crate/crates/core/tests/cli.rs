use std::path::PathBuf;
use std::process::Command;

use fpcp::frontend::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN, EXIT_UNSAT};

fn problem(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "problems", name].iter().collect();
    p.display().to_string()
}

fn fpcp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fpcp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_exit_codes_follow_verdicts() {
    let (c, out, _) = fpcp(&["solve", &problem("absorb_eq.fp")]);
    assert_eq!(c, EXIT_OK);
    assert!(out.starts_with("SAT"));
    assert!(!out.contains("VIOLATED"));

    let (c, out, _) = fpcp(&["solve", &problem("absorb_gt.fp")]);
    assert_eq!(c, EXIT_UNSAT);
    assert!(out.starts_with("UNSAT"));

    let (c, out, _) = fpcp(&["solve", &problem("sqrt2_tiny.fp")]);
    assert_eq!(c, EXIT_UNSAT, "{out}");
}

#[test]
fn node_budget_gives_unknown() {
    // sqrt(2) in binary32 has no exact solution and needs a long search.
    let f = problem("sqrt2_tiny.fp");
    let (c, out, _) = fpcp(&["solve", &f, "--format", "binary32", "--nodes", "3"]);
    assert_eq!(c, EXIT_UNKNOWN, "{out}");
    assert!(out.starts_with("UNKNOWN (node-limit)"));
}

#[test]
fn json_report_carries_witness_and_residues() {
    let (c, out, _) = fpcp(&["solve", &problem("absorb_eq.fp"), "--json", "--upper-first"]);
    assert_eq!(c, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "sat");
    assert_eq!(v["witness"][0]["name"], "x");
    assert_eq!(v["witness"][0]["bits"], "1.11111111111111111111111e2^14");
    let res = v["residues"].as_array().unwrap();
    assert_eq!(res.len(), 3);
    assert!(res.iter().all(|r| r["holds"] == true));
    assert!(v["stats"]["nodes"].as_u64().unwrap() >= 1);
}

#[test]
fn ablation_flag_disables_maxulp() {
    let f = problem("sum_bounds.fp");
    let (_, on, _) = fpcp(&["check", &f, "--json"]);
    let (_, off, _) = fpcp(&["check", &f, "--json", "--no-maxulp"]);
    let on: serde_json::Value = serde_json::from_str(&on).unwrap();
    let off: serde_json::Value = serde_json::from_str(&off).unwrap();
    assert_eq!(
        on["domains"][0]["domain"],
        "[-1.11111111111111111111111e2^24, 1.00000000000000000000000e2^25]"
    );
    assert_eq!(
        off["domains"][0]["domain"],
        "[-1.11111111111111111111111e2^127, 1.11111111111111111111111e2^127]"
    );
    assert_eq!(off["stats"]["maxulp_narrowings"], 0);
}

#[test]
fn trace_lists_each_narrowing() {
    let (_, out, _) = fpcp(&["check", &problem("sum_bounds.fp"), "--trace", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let trace = v["trace"].as_array().unwrap();
    let narrowings =
        v["stats"]["classic_narrowings"].as_u64().unwrap() + v["stats"]["maxulp_narrowings"].as_u64().unwrap();
    assert_eq!(trace.len() as u64, narrowings);
    assert!(trace.iter().any(|t| t["filter"] == "maxulp"));

    let (_, out, _) = fpcp(&["check", &problem("sum_bounds.fp"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn explain_shows_bounds() {
    let (c, out, _) = fpcp(&["explain", &problem("sum_bounds.fp")]);
    assert_eq!(c, EXIT_OK);
    assert!(out.contains("x in [-1.11111111111111111111111e2^24, 1.00000000000000000000000e2^25]"));
}

#[test]
fn verify_runs_the_suite() {
    let (c, out, _) = fpcp(&["verify", "tiny", "--systems", "20"]);
    assert_eq!(c, EXIT_OK, "{out}");
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 18);
    assert!(!out.contains("FAIL"));

    let (c, _, err) = fpcp(&["verify", "binary32"]);
    assert_eq!(c, EXIT_ERROR);
    assert!(err.contains("binary32"));
}

#[test]
fn errors_exit_with_three() {
    let (c, _, err) = fpcp(&["solve", "/nonexistent/problem.fp"]);
    assert_eq!(c, EXIT_ERROR);
    assert!(err.starts_with("error:"));

    let (c, _, _) = fpcp(&["solve"]);
    assert_eq!(c, EXIT_ERROR);

    let (c, _, _) = fpcp(&["solve", &problem("absorb_eq.fp"), "--format", "binary13"]);
    assert_eq!(c, EXIT_ERROR);

    let (c, out, _) = fpcp(&["--help"]);
    assert_eq!(c, EXIT_OK);
    assert!(out.contains("solve"));
}

#[test]
fn parse_errors_are_positioned() {
    let dir = std::env::temp_dir().join(format!("fpcp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.fp");
    std::fs::write(&f, "var x\nvar y\nz = x mul y\n").unwrap();
    let (c, _, err) = fpcp(&["check", f.to_str().unwrap()]);
    assert_eq!(c, EXIT_ERROR);
    assert!(err.contains("bad.fp:3:1: unknown variable `z`"), "{err}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn binary_reports_exit_status() {
    let bin = env!("CARGO_BIN_EXE_fpcp");
    let st = Command::new(bin)
        .args(["solve", &problem("absorb_gt.fp")])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(EXIT_UNSAT));
    let st = Command::new(bin)
        .args(["solve", &problem("absorb_eq.fp")])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&st.stdout).contains("re-evaluated:"));
}
