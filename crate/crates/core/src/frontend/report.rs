use std::fmt::Write;

use serde::Serialize;

use super::print::constraint_text;
use crate::engine::{
    filter_root, Conflict, Constraint, Filter, Network, Operand, Projection, PropStats, SolveConfig, SolveResult,
    SolveStats, TraceEvent, Verdict,
};
use crate::interval::FpInterval;
use crate::minifloat::{to_bit_literal, to_decimal, FpVal};

#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    pub name: String,
    pub bits: String,
    pub decimal: String,
}

/// A constraint re-evaluated at the witness.
#[derive(Debug, Clone, Serialize)]
pub struct Residue {
    pub constraint: String,
    /// Left-hand side as assigned.
    pub lhs: String,
    /// Right-hand side recomputed from the assignment.
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainReport {
    pub name: String,
    pub domain: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConflictReport {
    pub constraint: String,
    pub var: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceLine {
    pub step: u64,
    pub constraint: String,
    pub projection: Projection,
    pub filter: Filter,
    pub var: String,
    pub before: String,
    /// `None` when the domain was wiped out.
    pub after: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub format: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub witness: Vec<ValueReport>,
    pub residues: Vec<Residue>,
    pub root_domains: Option<Vec<DomainReport>>,
    pub conflict: Option<ConflictReport>,
    pub stats: SolveStats,
    pub trace: Vec<TraceLine>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub format: String,
    pub consistent: bool,
    pub domains: Option<Vec<DomainReport>>,
    pub conflict: Option<ConflictReport>,
    pub stats: PropStats,
    pub trace: Vec<TraceLine>,
}

fn value(net: &Network, name: &str, v: &FpVal) -> ValueReport {
    ValueReport {
        name: name.to_string(),
        bits: to_bit_literal(v, net.format()),
        decimal: to_decimal(v, net.format()),
    }
}

fn iv_text(net: &Network, d: &FpInterval) -> String {
    d.display(net.format()).to_string()
}

pub fn domains(net: &Network, d: &[FpInterval]) -> Vec<DomainReport> {
    net.vars()
        .iter()
        .zip(d)
        .map(|(v, iv)| DomainReport {
            name: v.name.clone(),
            domain: iv_text(net, iv),
        })
        .collect()
}

pub fn conflict(net: &Network, c: &Conflict) -> ConflictReport {
    ConflictReport {
        constraint: constraint_text(net, &net.constraints()[c.constraint]),
        var: net.var(c.var).name.clone(),
    }
}

pub fn trace_lines(net: &Network, events: &[TraceEvent]) -> Vec<TraceLine> {
    events
        .iter()
        .map(|e| TraceLine {
            step: e.step,
            constraint: constraint_text(net, &net.constraints()[e.constraint]),
            projection: e.projection,
            filter: e.filter,
            var: net.var(e.var).name.clone(),
            before: iv_text(net, &e.before),
            after: e.after.map(|a| iv_text(net, &a)),
        })
        .collect()
}

/// Recompute every constraint from a full assignment.
pub fn residues(net: &Network, w: &[FpVal]) -> Vec<Residue> {
    let fmt = net.format();
    let lit = |v: &Option<FpVal>| match v {
        Some(v) => to_bit_literal(v, fmt),
        None => "nan".to_string(),
    };
    net.constraints()
        .iter()
        .map(|c| {
            let (lhs, rhs) = match *c {
                Constraint::Arith { z, op, x, y } => (Some(w[z.0]), op.eval(w[x.0], w[y.0], fmt)),
                Constraint::Compare { lhs, rhs, .. } => (
                    Some(w[lhs.0]),
                    Some(match rhs {
                        Operand::Var(v) => w[v.0],
                        Operand::Const(k) => k,
                    }),
                ),
            };
            Residue {
                constraint: constraint_text(net, c),
                lhs: lit(&lhs),
                rhs: lit(&rhs),
                holds: c.holds(|v| w[v.0], fmt),
            }
        })
        .collect()
}

pub fn solve_report(net: &Network, r: &SolveResult, trace: &[TraceEvent]) -> SolveReport {
    let (witness, res, reason) = match &r.verdict {
        Verdict::Sat(w) => (
            net.vars().iter().zip(w).map(|(v, x)| value(net, &v.name, x)).collect(),
            residues(net, w),
            None,
        ),
        Verdict::Unsat => (Vec::new(), Vec::new(), None),
        Verdict::Unknown(why) => (
            Vec::new(),
            Vec::new(),
            Some(
                serde_json::to_value(why)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
            ),
        ),
    };
    SolveReport {
        format: net.format().name(),
        verdict: r.verdict.label().to_string(),
        reason,
        witness,
        residues: res,
        root_domains: r.root_domains.as_deref().map(|d| domains(net, d)),
        conflict: r.root_conflict.as_ref().map(|c| conflict(net, c)),
        stats: r.stats,
        trace: trace_lines(net, trace),
    }
}

fn write_trace(out: &mut String, trace: &[TraceLine]) {
    if trace.is_empty() {
        return;
    }
    writeln!(out, "trace:").unwrap();
    for t in trace {
        let proj = serde_json::to_value(t.projection).unwrap();
        let filt = serde_json::to_value(t.filter).unwrap();
        writeln!(
            out,
            "  #{:<5} {:<8} {:<7} {}  [{}]  {} -> {}",
            t.step,
            filt.as_str().unwrap_or(""),
            proj.as_str().unwrap_or(""),
            t.var,
            t.constraint,
            t.before,
            t.after.as_deref().unwrap_or("empty")
        )
        .unwrap();
    }
}

fn write_domains(out: &mut String, title: &str, d: &[DomainReport]) {
    writeln!(out, "{title}:").unwrap();
    let w = d.iter().map(|x| x.name.len()).max().unwrap_or(0);
    for x in d {
        writeln!(out, "  {:<w$}  {}", x.name, x.domain).unwrap();
    }
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.reason {
            Some(r) => writeln!(out, "{} ({r})", self.verdict.to_uppercase()).unwrap(),
            None => writeln!(out, "{}", self.verdict.to_uppercase()).unwrap(),
        }
        writeln!(out, "format: {}", self.format).unwrap();
        if !self.witness.is_empty() {
            writeln!(out, "witness:").unwrap();
            let w = self.witness.iter().map(|x| x.name.len()).max().unwrap_or(0);
            for x in &self.witness {
                writeln!(out, "  {:<w$} = {:<24} ({})", x.name, x.bits, x.decimal).unwrap();
            }
        }
        if !self.residues.is_empty() {
            writeln!(out, "re-evaluated:").unwrap();
            for r in &self.residues {
                let mark = if r.holds { "ok" } else { "VIOLATED" };
                writeln!(out, "  {:<8} {}   lhs {}  rhs {}", mark, r.constraint, r.lhs, r.rhs).unwrap();
            }
        }
        if let Some(c) = &self.conflict {
            writeln!(out, "root conflict: {} emptied by {}", c.var, c.constraint).unwrap();
        }
        let s = &self.stats;
        writeln!(
            out,
            "nodes {}  failures {}  depth {}  steps {}  narrowings {} classic / {} max-ulp  time {:.3} ms",
            s.nodes,
            s.failures,
            s.max_depth,
            s.propagation.steps,
            s.propagation.classic_narrowings,
            s.propagation.maxulp_narrowings,
            s.elapsed_us as f64 / 1000.0
        )
        .unwrap();
        write_trace(&mut out, &self.trace);
        out
    }
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", if self.consistent { "CONSISTENT" } else { "FAILED" }).unwrap();
        writeln!(out, "format: {}", self.format).unwrap();
        if let Some(d) = &self.domains {
            write_domains(&mut out, "domains", d);
        }
        if let Some(c) = &self.conflict {
            writeln!(out, "conflict: {} emptied by {}", c.var, c.constraint).unwrap();
        }
        let s = &self.stats;
        writeln!(
            out,
            "steps {}  narrowings {} classic / {} max-ulp",
            s.steps, s.classic_narrowings, s.maxulp_narrowings
        )
        .unwrap();
        write_trace(&mut out, &self.trace);
        out
    }
}

/// Propagate once at the root and report the filtered domains with the
/// full trace.
pub fn check_report(net: &Network, maxulp: bool) -> CheckReport {
    let cfg = SolveConfig {
        maxulp,
        ..SolveConfig::default()
    };
    let mut events: Vec<TraceEvent> = Vec::new();
    let mut hook = |e: &TraceEvent| events.push(e.clone());
    let mut stats = PropStats::default();
    let r = filter_root(net, &cfg, &mut stats, Some(&mut hook));
    CheckReport {
        format: net.format().name(),
        consistent: r.is_ok(),
        domains: r.as_ref().ok().map(|d| domains(net, d)),
        conflict: r.as_ref().err().map(|c| conflict(net, c)),
        stats,
        trace: trace_lines(net, &events),
    }
}
