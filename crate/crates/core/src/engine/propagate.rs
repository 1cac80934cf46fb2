use std::collections::VecDeque;

use serde::Serialize;

use super::network::{Constraint, Network, Operand, VarId};
use crate::classic;
use crate::interval::FpInterval;
use crate::maxulp::maxulp_bounds;
use crate::minifloat::{FpFormat, Op};

/// Which variable of a constraint an item narrows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// The result `z` of `z = x op y`.
    Direct,
    /// The first operand.
    First,
    /// The second operand.
    Second,
    /// Both sides of a comparison.
    Clip,
}

impl Projection {
    fn slot(self) -> usize {
        match self {
            Projection::Direct | Projection::Clip => 0,
            Projection::First => 1,
            Projection::Second => 2,
        }
    }

    fn for_constraint(c: &Constraint) -> &'static [Projection] {
        match c {
            Constraint::Arith { .. } => &[Projection::Direct, Projection::First, Projection::Second],
            Constraint::Compare { .. } => &[Projection::Clip],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    Classic,
    MaxUlp,
}

/// One narrowing (or wipe-out) observed during propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: u64,
    pub constraint: usize,
    pub projection: Projection,
    pub filter: Filter,
    pub var: VarId,
    pub before: FpInterval,
    /// `None` when the domain became empty.
    pub after: Option<FpInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropConfig {
    pub maxulp: bool,
    /// Items processed before giving up on reaching the fixpoint. Stopping
    /// early is sound; the domains are just less tight.
    pub step_limit: u64,
}

impl Default for PropConfig {
    fn default() -> Self {
        PropConfig {
            maxulp: true,
            step_limit: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PropStats {
    pub steps: u64,
    pub classic_narrowings: u64,
    pub maxulp_narrowings: u64,
    pub wipeouts: u64,
    /// Runs that hit the step limit.
    pub truncated: u64,
}

/// A domain became empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict {
    pub constraint: usize,
    pub var: VarId,
}

pub type TraceHook<'a> = &'a mut dyn FnMut(&TraceEvent);

struct Queue {
    items: VecDeque<(usize, Projection)>,
    queued: Vec<[bool; 3]>,
}

impl Queue {
    fn new(n: usize) -> Self {
        Queue {
            items: VecDeque::new(),
            queued: vec![[false; 3]; n],
        }
    }

    fn push_constraint(&mut self, idx: usize, c: &Constraint) {
        for &p in Projection::for_constraint(c) {
            if !self.queued[idx][p.slot()] {
                self.queued[idx][p.slot()] = true;
                self.items.push_back((idx, p));
            }
        }
    }

    fn pop(&mut self) -> Option<(usize, Projection)> {
        let (i, p) = self.items.pop_front()?;
        self.queued[i][p.slot()] = false;
        Some((i, p))
    }
}

fn classic_arith(
    op: Op,
    proj: Projection,
    z: &FpInterval,
    x: &FpInterval,
    y: &FpInterval,
    fmt: &FpFormat,
) -> Option<FpInterval> {
    use Projection::*;
    match (op, proj) {
        (Op::Add, Direct) => classic::add_direct(x, y, fmt)?.intersect(z).ok(),
        (Op::Add, First) => classic::add_operand(z, x, y, fmt),
        (Op::Add, Second) => classic::add_operand(z, y, x, fmt),
        (Op::Sub, Direct) => classic::sub_direct(x, y, fmt)?.intersect(z).ok(),
        (Op::Sub, First) => classic::sub_first(z, x, y, fmt),
        (Op::Sub, Second) => classic::sub_second(z, x, y, fmt),
        (Op::Mul, Direct) => classic::mul_direct(x, y, fmt)?.intersect(z).ok(),
        (Op::Mul, First) => classic::mul_operand(z, x, y, fmt),
        (Op::Mul, Second) => classic::mul_operand(z, y, x, fmt),
        (Op::Div, Direct) => classic::div_direct(x, y, fmt)?.intersect(z).ok(),
        (Op::Div, First) => classic::div_first(z, x, y, fmt),
        (Op::Div, Second) => classic::div_second(z, x, y, fmt),
        (_, Clip) => unreachable!("arithmetic constraints have no clip item"),
    }
}

struct Run<'a, 'b> {
    net: &'a Network,
    doms: &'a mut [FpInterval],
    stats: &'a mut PropStats,
    trace: Option<TraceHook<'b>>,
    queue: Queue,
}

impl Run<'_, '_> {
    /// Install a narrowed domain; `Err` on wipe-out.
    fn update(
        &mut self,
        c: usize,
        proj: Projection,
        filter: Filter,
        var: VarId,
        next: Option<FpInterval>,
    ) -> Result<(), Conflict> {
        let before = self.doms[var.0];
        let after = next.and_then(|n| n.intersect(&before).ok());
        if after == Some(before) {
            return Ok(());
        }
        if let Some(t) = self.trace.as_mut() {
            t(&TraceEvent {
                step: self.stats.steps,
                constraint: c,
                projection: proj,
                filter,
                var,
                before,
                after,
            });
        }
        let Some(after) = after else {
            self.stats.wipeouts += 1;
            return Err(Conflict { constraint: c, var });
        };
        match filter {
            Filter::Classic => self.stats.classic_narrowings += 1,
            Filter::MaxUlp => self.stats.maxulp_narrowings += 1,
        }
        self.doms[var.0] = after;
        for &w in self.net.watchers(var) {
            self.queue.push_constraint(w, &self.net.constraints()[w]);
        }
        Ok(())
    }

    fn step(&mut self, c: usize, proj: Projection, cfg: &PropConfig) -> Result<(), Conflict> {
        let fmt = *self.net.format();
        match self.net.constraints()[c] {
            Constraint::Arith { z, op, x, y } => {
                let target = match proj {
                    Projection::Direct => z,
                    Projection::First => x,
                    Projection::Second => y,
                    Projection::Clip => unreachable!(),
                };
                let (dz, dx, dy) = (self.doms[z.0], self.doms[x.0], self.doms[y.0]);
                let r = classic_arith(op, proj, &dz, &dx, &dy, &fmt);
                self.update(c, proj, Filter::Classic, target, r)?;
                if cfg.maxulp && proj != Projection::Direct {
                    let b = maxulp_bounds(op, &self.doms[z.0], &fmt);
                    let bound = if proj == Projection::First { b.x } else { b.y };
                    if let Some(bound) = bound {
                        let cur = self.doms[target.0];
                        self.update(c, proj, Filter::MaxUlp, target, cur.intersect(&bound).ok())?;
                    }
                }
            }
            Constraint::Compare { lhs, rel, rhs } => {
                let (rv, rd) = match rhs {
                    Operand::Var(v) => (Some(v), self.doms[v.0]),
                    Operand::Const(k) => (None, FpInterval::singleton(k)),
                };
                match classic::clip_compare(rel, &self.doms[lhs.0], &rd, &fmt) {
                    Some((nl, nr)) => {
                        self.update(c, proj, Filter::Classic, lhs, Some(nl))?;
                        if let Some(rv) = rv {
                            self.update(c, proj, Filter::Classic, rv, Some(nr))?;
                        }
                    }
                    None => {
                        self.update(c, proj, Filter::Classic, lhs, None)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Narrow `doms` to a fixpoint of every projection. With `seed` set only
/// constraints watching those variables start in the queue.
pub fn propagate(
    net: &Network,
    doms: &mut [FpInterval],
    seed: Option<&[VarId]>,
    cfg: &PropConfig,
    stats: &mut PropStats,
    trace: Option<TraceHook<'_>>,
) -> Result<(), Conflict> {
    let mut run = Run {
        net,
        doms,
        stats,
        trace,
        queue: Queue::new(net.constraints().len()),
    };
    match seed {
        None => {
            for (i, c) in net.constraints().iter().enumerate() {
                run.queue.push_constraint(i, c);
            }
        }
        Some(vars) => {
            for &v in vars {
                for &w in net.watchers(v) {
                    run.queue.push_constraint(w, &net.constraints()[w]);
                }
            }
        }
    }
    let mut budget = cfg.step_limit;
    while let Some((c, p)) = run.queue.pop() {
        if budget == 0 {
            run.stats.truncated += 1;
            log::debug!("propagation stopped at the step limit");
            break;
        }
        budget -= 1;
        run.stats.steps += 1;
        run.step(c, p, cfg)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::Cmp;
    use crate::minifloat::{from_f64, parse_decimal, FpVal};

    fn f1_network() -> (Network, VarId) {
        let f = FpFormat::binary32();
        let mut n = Network::new(f);
        let x = n.add_var("x", FpInterval::full()).unwrap();
        let y = n.add_const("y", parse_decimal("1.0e12", &f).unwrap()).unwrap();
        let z = n.add_var("z", FpInterval::full()).unwrap();
        n.add_compare(x, Cmp::Lt, Operand::Const(from_f64(10000.0, &f)))
            .unwrap();
        n.add_arith(z, Op::Add, x, y).unwrap();
        n.add_compare(z, Cmp::Gt, Operand::Var(y)).unwrap();
        (n, x)
    }

    #[test]
    fn infeasible_path_wipes_out() {
        let (n, _) = f1_network();
        let mut d = n.initial_domains();
        let mut st = PropStats::default();
        assert!(propagate(&n, &mut d, None, &PropConfig::default(), &mut st, None).is_err());
        assert_eq!(st.wipeouts, 1);
    }

    #[test]
    fn trace_sees_every_narrowing() {
        let f = FpFormat::binary32();
        let mut n = Network::new(f);
        let x = n.add_var("x", FpInterval::full()).unwrap();
        let y = n.add_var("y", FpInterval::full()).unwrap();
        let z = n
            .add_var("z", FpInterval::new(f.one(), from_f64(2.0, &f)).unwrap())
            .unwrap();
        n.add_arith(z, Op::Add, x, y).unwrap();
        let mut d = n.initial_domains();
        let mut st = PropStats::default();
        let mut events = Vec::new();
        let mut hook = |e: &TraceEvent| events.push(e.clone());
        propagate(&n, &mut d, None, &PropConfig::default(), &mut st, Some(&mut hook)).unwrap();
        assert_eq!(events.len() as u64, st.classic_narrowings + st.maxulp_narrowings);
        assert!(st.maxulp_narrowings >= 2);
        assert_eq!(d[x.0].hi(), crate::minifloat::parse_bit_literal("1e2^25", &f).unwrap());
        assert!(d[y.0].lo() < FpVal::pos_zero(&f));
    }

    #[test]
    fn ablation_leaves_operands_wide() {
        let f = FpFormat::binary32();
        let mut n = Network::new(f);
        let x = n.add_var("x", FpInterval::full()).unwrap();
        let y = n.add_var("y", FpInterval::full()).unwrap();
        let z = n
            .add_var("z", FpInterval::new(f.one(), from_f64(2.0, &f)).unwrap())
            .unwrap();
        n.add_arith(z, Op::Add, x, y).unwrap();
        let mut d = n.initial_domains();
        let cfg = PropConfig {
            maxulp: false,
            ..PropConfig::default()
        };
        propagate(&n, &mut d, None, &cfg, &mut PropStats::default(), None).unwrap();
        assert_eq!(d[x.0], FpInterval::finite(&f));
    }
}
