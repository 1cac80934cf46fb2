use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::parse::parse_problem;
use super::print::constraint_text;
use super::report::{check_report, solve_report, CheckReport, TraceLine};
use crate::engine::{solve, Constraint, Network, SolveConfig, TraceEvent, ValueOrder, Verdict};
use crate::maxulp::maxulp_bounds;
use crate::minifloat::FpFormat;
use crate::oracle::{run_property_suite_with, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fpcp",
    version,
    about = "Floating-point constraint solver with max-ULP filtering"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct Common {
    /// Problem file, or `-` for standard input.
    file: PathBuf,
    /// Override the file's format (binary32, binary64, tiny, custom(p,emax,emin)).
    #[arg(long)]
    format: Option<FpFormat>,
    /// Use only the classical projections.
    #[arg(long)]
    no_maxulp: bool,
    /// Print every domain narrowing.
    #[arg(long)]
    trace: bool,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Search for a satisfying assignment.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Node budget.
        #[arg(long, default_value_t = 1_000_000)]
        nodes: u64,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        time: f64,
        /// Try the upper half of each split first.
        #[arg(long)]
        upper_first: bool,
    },
    /// Propagate at the root only and print the filtered domains.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Show the max-ULP bounds of each arithmetic constraint and the root
    /// propagation trace.
    Explain {
        #[command(flatten)]
        common: Common,
    },
    /// Run the exhaustive property suite on a small format.
    Verify {
        #[arg(default_value = "tiny")]
        format: FpFormat,
        /// Random systems in the engine corpus; 0 skips it.
        #[arg(long, default_value_t = 500)]
        systems: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse {
        path: String,
        source: super::parse::ParseError,
    },
    #[error("{0}")]
    Other(String),
}

fn load(c: &Common) -> Result<Network, CliError> {
    let path = c.file.display().to_string();
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        s
    } else {
        std::fs::read_to_string(&c.file).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?
    };
    parse_problem(&text, c.format).map_err(|source| CliError::Parse { path, source })
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    json: bool,
    value: &T,
    text: impl FnOnce() -> String,
) -> std::io::Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)
    } else {
        write!(out, "{}", text())
    }
}

#[derive(Debug, Serialize)]
struct BoundLine {
    constraint: String,
    x: Option<String>,
    y: Option<String>,
}

#[derive(Debug, Serialize)]
struct ExplainReport {
    format: String,
    bounds: Vec<BoundLine>,
    check: CheckReport,
}

fn strip_trace(mut t: Vec<TraceLine>, keep: bool) -> Vec<TraceLine> {
    if !keep {
        t.clear();
    }
    t
}

fn run_cmd(cmd: Cmd, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: "<output>".into(),
        source: e,
    };
    match cmd {
        Cmd::Solve {
            common,
            nodes,
            time,
            upper_first,
        } => {
            let net = load(&common)?;
            if !(time.is_finite() && time >= 0.0) {
                return Err(CliError::Other(format!("invalid --time {time}")));
            }
            let cfg = SolveConfig {
                maxulp: !common.no_maxulp,
                node_limit: nodes,
                time_limit: Some(Duration::from_secs_f64(time)),
                value_order: if upper_first {
                    ValueOrder::UpperFirst
                } else {
                    ValueOrder::LowerFirst
                },
                ..SolveConfig::default()
            };
            let mut events: Vec<TraceEvent> = Vec::new();
            let mut hook = |e: &TraceEvent| events.push(e.clone());
            let trace_hook: Option<&mut dyn FnMut(&TraceEvent)> = if common.trace { Some(&mut hook) } else { None };
            let r = solve(&net, &cfg, trace_hook);
            let rep = solve_report(&net, &r, &events);
            emit(out, common.json, &rep, || rep.to_text()).map_err(io)?;
            Ok(match r.verdict {
                Verdict::Sat(_) => EXIT_OK,
                Verdict::Unsat => EXIT_UNSAT,
                Verdict::Unknown(_) => EXIT_UNKNOWN,
            })
        }
        Cmd::Check { common } => {
            let net = load(&common)?;
            let mut rep = check_report(&net, !common.no_maxulp);
            rep.trace = strip_trace(rep.trace, common.trace);
            emit(out, common.json, &rep, || rep.to_text()).map_err(io)?;
            Ok(if rep.consistent { EXIT_OK } else { EXIT_UNSAT })
        }
        Cmd::Explain { common } => {
            let net = load(&common)?;
            let fmt = net.format();
            let init = net.initial_domains();
            let bounds = net
                .constraints()
                .iter()
                .filter_map(|c| match *c {
                    Constraint::Arith { z, op, .. } => {
                        let b = maxulp_bounds(op, &init[z.0], fmt);
                        Some(BoundLine {
                            constraint: constraint_text(&net, c),
                            x: b.x.map(|i| i.display(fmt).to_string()),
                            y: b.y.map(|i| i.display(fmt).to_string()),
                        })
                    }
                    Constraint::Compare { .. } => None,
                })
                .collect();
            let rep = ExplainReport {
                format: fmt.name(),
                bounds,
                check: check_report(&net, !common.no_maxulp),
            };
            emit(out, common.json, &rep, || {
                let mut s = String::from("max-ulp bounds from the declared domains:\n");
                for b in &rep.bounds {
                    s += &format!(
                        "  {}\n    x in {}\n    y in {}\n",
                        b.constraint,
                        b.x.as_deref().unwrap_or("(none)"),
                        b.y.as_deref().unwrap_or("(none)")
                    );
                }
                s + &rep.check.to_text()
            })
            .map_err(io)?;
            Ok(if rep.check.consistent { EXIT_OK } else { EXIT_UNSAT })
        }
        Cmd::Verify {
            format,
            systems,
            seed,
            json,
        } => {
            let opts = SuiteOptions {
                systems,
                seed,
                ..SuiteOptions::default()
            };
            let rep = run_property_suite_with(&format, &opts).map_err(|e| CliError::Other(e.to_string()))?;
            emit(out, json, &rep, || {
                let mut s = String::new();
                for p in &rep.properties {
                    let mark = if p.passed() { "PASS" } else { "FAIL" };
                    s += &format!(
                        "{mark}  {:<32} {:>9} instances  {} failures\n",
                        p.name, p.instances, p.failures
                    );
                    for c in &p.counterexamples {
                        s += &format!("      {c}\n");
                    }
                }
                s += &format!("{} in {} ms\n", rep.format, rep.elapsed_ms);
                s
            })
            .map_err(io)?;
            Ok(if rep.passed() { EXIT_OK } else { EXIT_UNSAT })
        }
    }
}

/// Run the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match run_cmd(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
