use std::time::{Duration, Instant};

use serde::Serialize;

use super::network::{Network, VarId};
use super::propagate::{propagate, Conflict, PropConfig, PropStats, TraceHook};
use crate::interval::FpInterval;
use crate::minifloat::FpVal;

/// Which half of a split domain is explored first.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueOrder {
    #[default]
    LowerFirst,
    UpperFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveConfig {
    pub maxulp: bool,
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    pub value_order: ValueOrder,
    /// Per-propagation step budget.
    pub step_limit: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            maxulp: true,
            node_limit: 1_000_000,
            time_limit: Some(Duration::from_secs(60)),
            value_order: ValueOrder::LowerFirst,
            step_limit: PropConfig::default().step_limit,
        }
    }
}

impl SolveConfig {
    fn prop(&self) -> PropConfig {
        PropConfig {
            maxulp: self.maxulp,
            step_limit: self.step_limit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    NodeLimit,
    TimeLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A verified witness, one value per variable.
    Sat(Vec<FpVal>),
    Unsat,
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub failures: u64,
    pub max_depth: usize,
    pub propagation: PropStats,
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub verdict: Verdict,
    pub stats: SolveStats,
    /// Domains after the root propagation; `None` if it failed.
    pub root_domains: Option<Vec<FpInterval>>,
    /// The root conflict when the network failed without search.
    pub root_conflict: Option<Conflict>,
}

/// Propagate once at the root without searching.
pub fn filter_root(
    net: &Network,
    cfg: &SolveConfig,
    stats: &mut PropStats,
    trace: Option<TraceHook<'_>>,
) -> Result<Vec<FpInterval>, Conflict> {
    let mut d = net.initial_domains();
    propagate(net, &mut d, None, &cfg.prop(), stats, trace)?;
    Ok(d)
}

/// First-fail: the smallest non-singleton domain, earliest declared on ties.
fn choose(net: &Network, d: &[FpInterval]) -> Option<VarId> {
    let fmt = net.format();
    d.iter()
        .enumerate()
        .filter(|(_, iv)| !iv.is_singleton())
        .min_by_key(|(i, iv)| (iv.count(fmt), *i))
        .map(|(i, _)| VarId(i))
}

fn reborrow<'s>(t: &'s mut Option<TraceHook<'_>>) -> Option<TraceHook<'s>> {
    match t {
        Some(f) => Some(&mut **f),
        None => None,
    }
}

struct Node {
    doms: Vec<FpInterval>,
    changed: VarId,
    depth: usize,
}

/// Depth-first search over domain splits, propagating at every node.
pub fn solve(net: &Network, cfg: &SolveConfig, mut trace: Option<TraceHook<'_>>) -> SolveResult {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let prop = cfg.prop();
    let fmt = *net.format();

    let finish = |verdict, mut stats: SolveStats, root, conflict| {
        stats.elapsed_us = start.elapsed().as_micros() as u64;
        SolveResult {
            verdict,
            stats,
            root_domains: root,
            root_conflict: conflict,
        }
    };

    let root = match filter_root(net, cfg, &mut stats.propagation, reborrow(&mut trace)) {
        Ok(d) => d,
        Err(c) => {
            stats.nodes = 1;
            stats.failures = 1;
            return finish(Verdict::Unsat, stats, None, Some(c));
        }
    };

    let mut stack: Vec<Node> = Vec::new();
    let mut pending = Some(root.clone());
    loop {
        let (doms, depth) = match pending.take() {
            Some(d) => (d, 0),
            None => {
                let Some(mut node) = stack.pop() else {
                    return finish(Verdict::Unsat, stats, Some(root), None);
                };
                if stats.nodes >= cfg.node_limit {
                    return finish(Verdict::Unknown(UnknownReason::NodeLimit), stats, Some(root), None);
                }
                if cfg.time_limit.is_some_and(|t| start.elapsed() >= t) {
                    return finish(Verdict::Unknown(UnknownReason::TimeLimit), stats, Some(root), None);
                }
                let r = propagate(
                    net,
                    &mut node.doms,
                    Some(&[node.changed]),
                    &prop,
                    &mut stats.propagation,
                    reborrow(&mut trace),
                );
                if r.is_err() {
                    stats.nodes += 1;
                    stats.failures += 1;
                    continue;
                }
                (node.doms, node.depth)
            }
        };
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(depth);

        let Some(v) = choose(net, &doms) else {
            let w: Vec<FpVal> = doms.iter().map(|d| d.lo()).collect();
            if net.satisfied_by(&w) {
                return finish(Verdict::Sat(w), stats, Some(root), None);
            }
            stats.failures += 1;
            continue;
        };
        let (left, right) = doms[v.0].split(&fmt).expect("non-singleton");
        let (first, second) = match cfg.value_order {
            ValueOrder::LowerFirst => (left, right),
            ValueOrder::UpperFirst => (right, left),
        };
        // Push the preferred half last so it is popped first.
        for half in [second, first] {
            let mut d = doms.clone();
            d[v.0] = half;
            stack.push(Node {
                doms: d,
                changed: v,
                depth: depth + 1,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::Cmp;
    use crate::engine::Operand;
    use crate::minifloat::{from_f64, FpFormat, Op};

    #[test]
    fn tiny_square_root_of_two_is_unsat() {
        // No tiny value squares exactly to 2.
        let f = FpFormat::tiny();
        let mut n = Network::new(f);
        let x = n.add_var("x", FpInterval::full()).unwrap();
        let two = n.add_const("two", from_f64(2.0, &f)).unwrap();
        n.add_arith(two, Op::Mul, x, x).unwrap();
        let r = solve(&n, &SolveConfig::default(), None);
        let brute = FpInterval::full()
            .iter(&f)
            .any(|v| Op::Mul.eval(v, v, &f) == Some(from_f64(2.0, &f)));
        assert_eq!(r.verdict.is_unsat(), !brute);
    }

    #[test]
    fn witness_is_verified() {
        let f = FpFormat::tiny();
        let mut n = Network::new(f);
        let x = n.add_var("x", FpInterval::full()).unwrap();
        let y = n.add_var("y", FpInterval::full()).unwrap();
        let z = n.add_var("z", FpInterval::full()).unwrap();
        n.add_arith(z, Op::Add, x, y).unwrap();
        n.add_compare(z, Cmp::Eq, Operand::Const(from_f64(3.0, &f))).unwrap();
        n.add_compare(x, Cmp::Gt, Operand::Var(y)).unwrap();
        for order in [ValueOrder::LowerFirst, ValueOrder::UpperFirst] {
            let cfg = SolveConfig {
                value_order: order,
                ..SolveConfig::default()
            };
            let Verdict::Sat(w) = solve(&n, &cfg, None).verdict else {
                panic!("expected a witness");
            };
            assert!(n.satisfied_by(&w));
        }
    }

    #[test]
    fn node_limit_reports_unknown() {
        // Search is needed: propagation alone cannot decide x * x == 2.
        let f = FpFormat::binary32();
        let mut n = Network::new(f);
        let x = n.add_var("x", FpInterval::full()).unwrap();
        let z = n.add_var("z", FpInterval::full()).unwrap();
        n.add_arith(z, Op::Mul, x, x).unwrap();
        n.add_compare(z, Cmp::Eq, Operand::Const(from_f64(2.0, &f))).unwrap();
        let cfg = SolveConfig {
            node_limit: 3,
            ..SolveConfig::default()
        };
        let r = solve(&n, &cfg, None);
        assert_eq!(r.verdict, Verdict::Unknown(UnknownReason::NodeLimit));
        assert_eq!(r.stats.nodes, 3);
    }
}
