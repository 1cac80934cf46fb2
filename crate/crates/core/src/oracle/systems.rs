//! Random small constraint systems and their exhaustive solution sets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::brute::{Oracle, Universe};
use super::OracleError;
use crate::classic::Cmp;
use crate::engine::{propagate, solve, Constraint, Network, Operand, PropConfig, PropStats, SolveConfig, Verdict};
use crate::interval::FpInterval;
use crate::minifloat::{FpVal, Op};

/// Largest product of free-variable domain sizes [`enumerate_solutions`]
/// accepts.
pub const ENUMERATION_LIMIT: u128 = 50_000_000;

fn random_interval(rng: &mut ChaCha8Rng, u: &Universe, max_width: Option<usize>) -> FpInterval {
    let n = u.len();
    let (a, b) = match max_width {
        Some(w) => {
            let a = rng.gen_range(0..n);
            (a, (a + rng.gen_range(0..=w)).min(n - 1))
        }
        None => {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            (a.min(b), a.max(b))
        }
    };
    FpInterval::new(u.get(a), u.get(b)).expect("ordered ranks")
}

fn random_domain(rng: &mut ChaCha8Rng, u: &Universe, narrow: bool) -> FpInterval {
    match rng.gen_range(0..10) {
        _ if narrow => random_interval(rng, u, Some(12)),
        0..=3 => FpInterval::full(),
        4..=6 => random_interval(rng, u, None),
        _ => random_interval(rng, u, Some(8)),
    }
}

fn random_op(rng: &mut ChaCha8Rng) -> Op {
    Op::ALL[rng.gen_range(0..4)]
}

fn random_cmp(rng: &mut ChaCha8Rng) -> Cmp {
    [Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ge, Cmp::Gt][rng.gen_range(0..5)]
}

/// A random system of at most four variables and three constraints.
///
/// Variables are either free or defined by an arithmetic constraint over
/// earlier variables, which keeps exhaustive enumeration cheap; the other
/// constraints are comparisons or further arithmetic checks.
pub fn random_system(rng: &mut ChaCha8Rng, u: &Universe) -> Network {
    let fmt = *u.format();
    let mut net = Network::new(fmt);
    let nfree = match rng.gen_range(0..10) {
        0..=1 => 1,
        2..=8 => 2,
        _ => 3,
    };
    let ncons = rng.gen_range(1..=3);
    let nderived = rng.gen_range(0..=ncons.min(4 - nfree));
    let mut vars = Vec::new();
    for i in 0..nfree {
        // With three free variables two of them stay narrow.
        let narrow = nfree == 3 && i > 0;
        let d = random_domain(rng, u, narrow);
        vars.push(net.add_var(&format!("v{i}"), d).expect("fresh name"));
    }
    for i in 0..nderived {
        let x = vars[rng.gen_range(0..vars.len())];
        let y = vars[rng.gen_range(0..vars.len())];
        let d = match rng.gen_range(0..10) {
            0..=3 => FpInterval::full(),
            4..=7 => random_interval(rng, u, Some(6)),
            _ => random_interval(rng, u, None),
        };
        let z = net.add_var(&format!("v{}", nfree + i), d).expect("fresh name");
        net.add_arith(z, random_op(rng), x, y).expect("known vars");
        vars.push(z);
    }
    for _ in nderived..ncons {
        let pick = |rng: &mut ChaCha8Rng| vars[rng.gen_range(0..vars.len())];
        if rng.gen_range(0..10) < 7 {
            let lhs = pick(rng);
            let rhs = if rng.gen_bool(0.5) {
                Operand::Var(pick(rng))
            } else {
                Operand::Const(u.get(rng.gen_range(0..u.len())))
            };
            net.add_compare(lhs, random_cmp(rng), rhs).expect("known vars");
        } else {
            let (z, x, y) = (pick(rng), pick(rng), pick(rng));
            net.add_arith(z, random_op(rng), x, y).expect("known vars");
        }
    }
    net
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub count: u64,
    /// Per variable, the least and greatest value taken by some solution.
    pub hull: Vec<Option<(FpVal, FpVal)>>,
    /// The first solution in enumeration order.
    pub witness: Option<Vec<FpVal>>,
}

enum Step {
    Free(usize),
    Derive { var: usize, op: Op, x: usize, y: usize },
}

/// Numeric comparison on ranks; the two zeros compare equal.
fn rank_holds(rel: Cmp, a: usize, b: usize, zero_lo: usize) -> bool {
    let norm = |r: usize| if r == zero_lo { r + 1 } else { r };
    let (a, b) = (norm(a), norm(b));
    match rel {
        Cmp::Lt => a < b,
        Cmp::Le => a <= b,
        Cmp::Eq => a == b,
        Cmp::Ge => a >= b,
        Cmp::Gt => a > b,
    }
}

/// Whether constraint `c` holds for an assignment given as ranks.
fn holds_ranks(net: &Network, oracle: &Oracle, a: &[usize], c: usize, zero_lo: usize) -> bool {
    match net.constraints()[c] {
        Constraint::Arith { z, op, x, y } => oracle.table(op).get(a[x.0], a[y.0]) == Some(a[z.0]),
        Constraint::Compare { lhs, rel, rhs } => {
            let r = match rhs {
                Operand::Var(v) => a[v.0],
                Operand::Const(k) => oracle.universe().index(&k),
            };
            rank_holds(rel, a[lhs.0], r, zero_lo)
        }
    }
}

struct Enumerator<'a> {
    oracle: &'a Oracle,
    net: &'a Network,
    plan: Vec<Step>,
    /// Constraint indices checkable once plan step `i` is done.
    checks: Vec<Vec<usize>>,
    ranges: Vec<(usize, usize)>,
    assign: Vec<usize>,
    zero_lo: usize,
    out: SolutionSet,
}

impl Enumerator<'_> {
    fn holds(&self, c: usize) -> bool {
        holds_ranks(self.net, self.oracle, &self.assign, c, self.zero_lo)
    }

    fn run(&mut self, step: usize) {
        if step == self.plan.len() {
            let u = self.oracle.universe();
            self.out.count += 1;
            for (h, &r) in self.out.hull.iter_mut().zip(&self.assign) {
                let v = u.get(r);
                *h = Some(match *h {
                    None => (v, v),
                    Some((lo, hi)) => (lo.min(v), hi.max(v)),
                });
            }
            if self.out.witness.is_none() {
                self.out.witness = Some(self.assign.iter().map(|&r| u.get(r)).collect());
            }
            return;
        }
        match self.plan[step] {
            Step::Free(v) => {
                let (lo, hi) = self.ranges[v];
                for r in lo..=hi {
                    self.assign[v] = r;
                    if self.checks[step].iter().all(|&c| self.holds(c)) {
                        self.run(step + 1);
                    }
                }
            }
            Step::Derive { var, op, x, y } => {
                let Some(r) = self.oracle.table(op).get(self.assign[x], self.assign[y]) else {
                    return;
                };
                let (lo, hi) = self.ranges[var];
                if r < lo || r > hi {
                    return;
                }
                self.assign[var] = r;
                if self.checks[step].iter().all(|&c| self.holds(c)) {
                    self.run(step + 1);
                }
            }
        }
    }
}

/// All solutions of `net` by enumeration with reference arithmetic.
pub fn enumerate_solutions(net: &Network, oracle: &Oracle) -> Result<SolutionSet, OracleError> {
    let u = oracle.universe();
    if net.format() != u.format() {
        return Err(OracleError::FormatMismatch);
    }
    let n = net.vars().len();
    let ranges: Vec<(usize, usize)> = net
        .vars()
        .iter()
        .map(|v| (u.index(&v.domain.lo()), u.index(&v.domain.hi())))
        .collect();

    let mut defined = vec![false; n];
    let mut used = vec![false; net.constraints().len()];
    let mut plan = Vec::new();
    let mut product: u128 = 1;
    while defined.iter().any(|d| !d) {
        let next = net.constraints().iter().enumerate().find_map(|(i, c)| match *c {
            Constraint::Arith { z, op, x, y } if !used[i] && !defined[z.0] && defined[x.0] && defined[y.0] => {
                Some((i, z.0, op, x.0, y.0))
            }
            _ => None,
        });
        match next {
            Some((i, var, op, x, y)) => {
                used[i] = true;
                defined[var] = true;
                plan.push(Step::Derive { var, op, x, y });
            }
            None => {
                let v = defined.iter().position(|d| !d).expect("some undefined");
                defined[v] = true;
                product = product.saturating_mul((ranges[v].1 - ranges[v].0 + 1) as u128);
                plan.push(Step::Free(v));
            }
        }
    }
    if product > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge(format!("{product} candidate assignments")));
    }

    let mut position = vec![0; n];
    for (i, s) in plan.iter().enumerate() {
        let v = match *s {
            Step::Free(v) | Step::Derive { var: v, .. } => v,
        };
        position[v] = i;
    }
    let mut checks = vec![Vec::new(); plan.len()];
    for (i, c) in net.constraints().iter().enumerate() {
        if used[i] {
            continue;
        }
        let at = c.vars().iter().map(|v| position[v.0]).max().unwrap_or(0);
        checks[at].push(i);
    }

    let mut e = Enumerator {
        oracle,
        net,
        plan,
        checks,
        ranges,
        assign: vec![0; n],
        zero_lo: u.index(&FpVal::neg_zero(u.format())),
        out: SolutionSet {
            count: 0,
            hull: vec![None; n],
            witness: None,
        },
    };
    if n > 0 {
        e.run(0);
    } else {
        e.out.count = 1;
        e.out.witness = Some(Vec::new());
    }
    Ok(e.out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub systems: usize,
    pub satisfiable: usize,
    /// Soundness or verdict disagreements with enumeration.
    pub discrepancies: Vec<String>,
    /// Systems where max-ULP filtering left some domain larger than the
    /// classical filters alone.
    pub ablation_violations: Vec<String>,
    /// Systems where max-ULP filtering gave strictly smaller domains.
    pub strict_improvements: usize,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty() && self.ablation_violations.is_empty()
    }
}

fn fixpoint(net: &Network, maxulp: bool) -> Option<Vec<FpInterval>> {
    let mut d = net.initial_domains();
    let cfg = PropConfig {
        maxulp,
        ..PropConfig::default()
    };
    propagate(net, &mut d, None, &cfg, &mut PropStats::default(), None).ok()?;
    Some(d)
}

fn covers(d: &[FpInterval], sols: &SolutionSet) -> bool {
    d.iter().zip(&sols.hull).all(|(iv, h)| match h {
        Some((lo, hi)) => iv.contains(lo) && iv.contains(hi),
        None => true,
    })
}

/// Check one system against enumeration; appends findings to `rep`.
pub fn check_system(net: &Network, oracle: &Oracle, rep: &mut CorpusReport, label: &str) {
    let fmt = *net.format();
    let sols = match enumerate_solutions(net, oracle) {
        Ok(s) => s,
        Err(e) => {
            rep.discrepancies.push(format!("{label}: not enumerable: {e}"));
            return;
        }
    };
    rep.systems += 1;
    if sols.count > 0 {
        rep.satisfiable += 1;
    }
    let on = fixpoint(net, true);
    let off = fixpoint(net, false);
    for (name, d) in [("max-ulp", &on), ("classic", &off)] {
        match d {
            None if sols.count > 0 => rep
                .discrepancies
                .push(format!("{label}: {name} propagation failed on a satisfiable system")),
            Some(d) if !covers(d, &sols) => rep
                .discrepancies
                .push(format!("{label}: {name} propagation removed a solution")),
            _ => {}
        }
    }
    match (&on, &off) {
        (Some(a), Some(b)) => {
            let hurt = a.iter().zip(b).any(|(x, y)| x.count(&fmt) > y.count(&fmt));
            let helped = a.iter().zip(b).any(|(x, y)| x.count(&fmt) < y.count(&fmt));
            if hurt {
                rep.ablation_violations
                    .push(format!("{label}: a domain is larger with max-ULP enabled"));
            } else if helped {
                rep.strict_improvements += 1;
            }
        }
        (None, Some(_)) => rep.strict_improvements += 1,
        (Some(_), None) => rep
            .ablation_violations
            .push(format!("{label}: only the classical run failed")),
        (None, None) => {}
    }

    let cfg = SolveConfig {
        time_limit: None,
        ..SolveConfig::default()
    };
    let r = solve(net, &cfg, None);
    match &r.verdict {
        Verdict::Sat(w) => {
            let ranks: Vec<usize> = w.iter().map(|v| oracle.universe().index(v)).collect();
            let in_dom = net.vars().iter().zip(w).all(|(v, x)| v.domain.contains(x));
            let zero_lo = oracle.universe().index(&FpVal::neg_zero(&fmt));
            let ok = in_dom && (0..net.constraints().len()).all(|c| holds_ranks(net, oracle, &ranks, c, zero_lo));
            if !ok {
                rep.discrepancies
                    .push(format!("{label}: witness fails reference check"));
            }
            if sols.count == 0 {
                rep.discrepancies
                    .push(format!("{label}: sat, but enumeration found nothing"));
            }
        }
        Verdict::Unsat if sols.count > 0 => rep
            .discrepancies
            .push(format!("{label}: unsat, but {} solutions exist", sols.count)),
        Verdict::Unknown(why) => rep.discrepancies.push(format!("{label}: search gave up ({why:?})")),
        Verdict::Unsat => {}
    }
    let again = solve(net, &cfg, None);
    if again.verdict != r.verdict
        || again.stats.nodes != r.stats.nodes
        || again.stats.propagation != r.stats.propagation
    {
        rep.discrepancies.push(format!("{label}: solve is not deterministic"));
    }
}

/// Generate `count` systems from `seed` and check each one.
pub fn run_corpus(oracle: &Oracle, count: usize, seed: u64) -> CorpusReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CorpusReport::default();
    for i in 0..count {
        let net = random_system(&mut rng, oracle.universe());
        check_system(&net, oracle, &mut rep, &format!("system {i}"));
    }
    rep
}
