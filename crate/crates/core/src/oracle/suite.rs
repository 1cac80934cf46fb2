//! Exhaustive property checks on one small format.

use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::brute::Oracle;
use super::systems::run_corpus;
use super::OracleError;
use crate::classic;
use crate::interval::FpInterval;
use crate::maxulp::{
    delta_div_second, maxulp_bounds_with, mu_add_with, ulpmax_add, ulpmax_div, ulpmax_mul, ulpmin_add, MuRule,
};
use crate::minifloat::{parse_bit_literal, parse_decimal, round_bits, to_bit_literal, to_decimal, FpFormat, FpVal, Op};

const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

impl PropertyReport {
    fn new(name: &str) -> Self {
        PropertyReport {
            name: name.to_string(),
            instances: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub format: String,
    pub properties: Vec<PropertyReport>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Selection rule under test for the interval maximisation of the
    /// addition bound.
    pub mu_rule: MuRule,
    /// Random instances per operator for the classical projections.
    pub classic_instances: usize,
    /// Random systems for the propagation and search checks; 0 skips them.
    pub systems: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            mu_rule: MuRule::Corrected,
            classic_instances: 400,
            systems: 500,
            seed: 0x5eed,
        }
    }
}

/// Run every property with default options.
pub fn run_property_suite(fmt: &FpFormat) -> Result<SuiteReport, OracleError> {
    run_property_suite_with(fmt, &SuiteOptions::default())
}

pub fn run_property_suite_with(fmt: &FpFormat, opts: &SuiteOptions) -> Result<SuiteReport, OracleError> {
    let start = Instant::now();
    let o = Oracle::new(fmt)?;
    let mut properties = vec![
        arith_reference(&o),
        rounding_monotone_symmetric(fmt),
        succ_pred_inverse(&o),
        fmin_multiples(&o),
        parity(&o),
        literal_round_trip(&o),
        interval_lattice(&o, opts.seed),
        classic_soundness(&o, opts),
    ];
    properties.extend(ulpmax_exact(&o));
    properties.push(mu_add_maximal(&o, opts.mu_rule));
    properties.push(ulpmax_monotone(&o));
    properties.push(mul_div_fmax_round_trip(&o));
    properties.push(delta_div_bound(&o));
    properties.push(maxulp_interval_sound(&o, opts.mu_rule));
    properties.push(maxulp_subsumed(&o, opts));
    properties.push(brute_order_independent(&o, opts.seed));
    if opts.systems > 0 {
        properties.push(engine_corpus(&o, opts));
    }
    Ok(SuiteReport {
        format: fmt.name(),
        properties,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn lit(v: &FpVal, fmt: &FpFormat) -> String {
    to_bit_literal(v, fmt)
}

fn show(iv: &Option<FpInterval>, fmt: &FpFormat) -> String {
    match iv {
        Some(i) => i.display(fmt).to_string(),
        None => "empty".into(),
    }
}

fn arith_reference(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("arith-reference");
    for op in Op::ALL {
        for &x in o.universe().values() {
            for &y in o.universe().values() {
                let got = op.eval(x, y, fmt);
                let want = o.eval(op, x, y);
                r.check(got == want, || {
                    format!("{} {op} {}: {:?} vs {:?}", lit(&x, fmt), lit(&y, fmt), got, want)
                });
            }
        }
    }
    r
}

fn rounding_monotone_symmetric(fmt: &FpFormat) -> PropertyReport {
    let mut r = PropertyReport::new("rounding-monotone-symmetric");
    // A grid three bits finer than f_min, reaching past the overflow
    // threshold.
    let p = fmt.precision() as i64;
    let exp = fmt.e_min() as i64 + 1 - p - 3;
    let top = fmt.e_max() as i64 + 2 - exp;
    let Some(steps) = 1u128.checked_shl(top as u32).filter(|&s| s <= 1 << 22) else {
        r.check(false, || "format too large for the rounding grid".into());
        return r;
    };
    let round = |neg: bool, k: u128| round_bits(neg, &BigUint::from(k), exp, false, fmt).value;
    let mut prev = round(false, 0);
    for k in 1..=steps {
        let cur = round(false, k);
        r.check(prev.num_cmp(&cur).is_le(), || format!("round({}) > round({k})", k - 1));
        let neg = round(true, k);
        r.check(neg == cur.neg(), || format!("round(-{k}) != -round({k})"));
        prev = cur;
    }
    r
}

fn succ_pred_inverse(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("succ-pred-inverse");
    for &v in o.universe().values() {
        if v.is_infinite() {
            continue;
        }
        let a = v.succ(fmt).and_then(|s| s.pred(fmt));
        let b = v.pred(fmt).and_then(|s| s.succ(fmt));
        r.check(a == Ok(v) && b == Ok(v), || lit(&v, fmt));
    }
    r
}

fn fmin_multiples(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("fmin-multiples");
    let q = fmt.e_min() as i64 + 1 - fmt.precision() as i64;
    for &v in o.universe().values() {
        if let Some(x) = v.exact(fmt) {
            r.check(x.is_zero() || x.exp >= q, || lit(&v, fmt));
        }
    }
    r
}

fn parity(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("parity");
    for &v in o.universe().values() {
        if let Some(m) = v.significand() {
            r.check(v.is_even() == (m % 2 == 0) && v.is_odd() != v.is_even(), || {
                lit(&v, fmt)
            });
        }
    }
    r
}

fn literal_round_trip(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("literal-round-trip");
    for &v in o.universe().values() {
        let b = to_bit_literal(&v, fmt);
        r.check(parse_bit_literal(&b, fmt) == Ok(v), || format!("bit literal {b}"));
        let d = to_decimal(&v, fmt);
        let back = parse_decimal(&d, fmt);
        // Decimal zeros and infinities keep their sign too.
        r.check(
            back == Ok(v) && back.map(|x| x.is_sign_negative()) == Ok(v.is_sign_negative()),
            || format!("decimal {d} for {b}"),
        );
    }
    r
}

fn interval_lattice(o: &Oracle, seed: u64) -> PropertyReport {
    let fmt = o.format();
    let u = o.universe();
    let n = u.len();
    let mut r = PropertyReport::new("interval-lattice");
    for a in 0..n {
        for b in a + 1..n {
            let iv = FpInterval::new(u.get(a), u.get(b)).unwrap();
            let (lo, hi) = iv.split(fmt).unwrap();
            let (cl, cr) = (lo.count(fmt), hi.count(fmt));
            r.check(
                cl + cr == iv.count(fmt) && cl.abs_diff(cr) <= 1 && lo.hi() < hi.lo(),
                || iv.display(fmt).to_string(),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng| {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        FpInterval::new(u.get(a.min(b)), u.get(a.max(b))).unwrap()
    };
    for _ in 0..20_000 {
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let meet = a.intersect(&b).ok();
        let join = a.hull(&b);
        let ok = (0..n).step_by(3).all(|i| {
            let v = u.get(i);
            let both = a.contains(&v) && b.contains(&v);
            meet.is_some_and(|m| m.contains(&v)) == both && (!(a.contains(&v) || b.contains(&v)) || join.contains(&v))
        }) && join.lo() == a.lo().min(b.lo())
            && join.hi() == a.hi().max(b.hi());
        r.check(ok, || format!("{} and {}", a.display(fmt), b.display(fmt)));
    }
    r
}

fn projections(op: Op) -> [(&'static str, ProjFn); 3] {
    match op {
        Op::Add => [
            ("direct", |z, x, y, f| classic::add_direct(x, y, f)?.intersect(z).ok()),
            ("first", classic::add_operand),
            ("second", |z, x, y, f| classic::add_operand(z, y, x, f)),
        ],
        Op::Sub => [
            ("direct", |z, x, y, f| classic::sub_direct(x, y, f)?.intersect(z).ok()),
            ("first", classic::sub_first),
            ("second", classic::sub_second),
        ],
        Op::Mul => [
            ("direct", |z, x, y, f| classic::mul_direct(x, y, f)?.intersect(z).ok()),
            ("first", classic::mul_operand),
            ("second", |z, x, y, f| classic::mul_operand(z, y, x, f)),
        ],
        Op::Div => [
            ("direct", |z, x, y, f| classic::div_direct(x, y, f)?.intersect(z).ok()),
            ("first", classic::div_first),
            ("second", classic::div_second),
        ],
    }
}

type ProjFn = fn(&FpInterval, &FpInterval, &FpInterval, &FpFormat) -> Option<FpInterval>;

fn random_iv(rng: &mut ChaCha8Rng, n: usize, o: &Oracle) -> FpInterval {
    let u = o.universe();
    let (a, b) = match rng.gen_range(0..4) {
        0 => (0, n - 1),
        1 => {
            let a = rng.gen_range(0..n);
            (a, (a + rng.gen_range(0..16)).min(n - 1))
        }
        _ => {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            (a.min(b), a.max(b))
        }
    };
    FpInterval::new(u.get(a), u.get(b)).unwrap()
}

/// Hulls of the solutions of `z = x op y` inside the boxes, as
/// `[z, x, y]`.
fn solution_hulls(o: &Oracle, op: Op, z: &FpInterval, x: &FpInterval, y: &FpInterval) -> [Option<(usize, usize)>; 3] {
    let u = o.universe();
    let t = o.table(op);
    let (zl, zh) = (u.index(&z.lo()), u.index(&z.hi()));
    let mut h: [Option<(usize, usize)>; 3] = [None; 3];
    let mut add = |k: usize, v: usize| {
        h[k] = Some(match h[k] {
            None => (v, v),
            Some((a, b)) => (a.min(v), b.max(v)),
        });
    };
    for xi in u.index(&x.lo())..=u.index(&x.hi()) {
        for yi in u.index(&y.lo())..=u.index(&y.hi()) {
            if let Some(r) = t.get(xi, yi) {
                if r >= zl && r <= zh {
                    add(0, r);
                    add(1, xi);
                    add(2, yi);
                }
            }
        }
    }
    h
}

fn classic_soundness(o: &Oracle, opts: &SuiteOptions) -> PropertyReport {
    let fmt = o.format();
    let u = o.universe();
    let n = u.len();
    let mut r = PropertyReport::new("classic-soundness");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc1a55);
    for op in Op::ALL {
        for _ in 0..opts.classic_instances {
            let (z, x, y) = (
                random_iv(&mut rng, n, o),
                random_iv(&mut rng, n, o),
                random_iv(&mut rng, n, o),
            );
            let hulls = solution_hulls(o, op, &z, &x, &y);
            for (k, (name, f)) in projections(op).into_iter().enumerate() {
                let input = [z, x, y][k];
                let got = f(&z, &x, &y, fmt).and_then(|g| g.intersect(&input).ok());
                let ok = match (hulls[k], got) {
                    (None, _) => true,
                    (Some(_), None) => false,
                    (Some((a, b)), Some(g)) => g.contains(&u.get(a)) && g.contains(&u.get(b)),
                };
                r.check(ok, || {
                    format!(
                        "{op} {name}: z={} x={} y={} gave {}",
                        z.display(fmt),
                        x.display(fmt),
                        y.display(fmt),
                        show(&got, fmt)
                    )
                });
                // Idempotence: a second application changes nothing.
                if let Some(g) = got {
                    let mut b = [z, x, y];
                    b[k] = g;
                    let again = f(&b[0], &b[1], &b[2], fmt).and_then(|h| h.intersect(&g).ok());
                    r.check(again == Some(g), || {
                        format!(
                            "{op} {name} not idempotent on z={} x={} y={}",
                            z.display(fmt),
                            x.display(fmt),
                            y.display(fmt)
                        )
                    });
                }
            }
        }
    }
    r
}

fn ulpmax_exact(o: &Oracle) -> Vec<PropertyReport> {
    let fmt = o.format();
    let mut add = PropertyReport::new("ulpmax-add-exact");
    let mut mul = PropertyReport::new("ulpmax-mul-exact");
    let mut div = PropertyReport::new("ulpmax-div-exact");
    let unb = fmt.unbounded();
    for &z in o.universe().values() {
        if !z.is_nonzero_finite() {
            continue;
        }
        let want = o.brute_ulpmax(Op::Add, z);
        let got = ulpmax_add(z, fmt);
        add.check(want == Some(got), || {
            format!(
                "z={}: formula {} brute {}",
                lit(&z, fmt),
                lit(&got, &unb),
                show_val(&want, &unb)
            )
        });
        let wmin = o.brute_ulpmin(Op::Add, z);
        let gmin = ulpmin_add(z, fmt);
        add.check(wmin == Some(gmin), || format!("ulpmin at z={}", lit(&z, fmt)));
        if let Ok(got) = ulpmax_mul(z, fmt) {
            let want = o.brute_ulpmax(Op::Mul, z);
            mul.check(want == Some(got), || {
                format!(
                    "z={}: formula {} brute {}",
                    lit(&z, fmt),
                    lit(&got, fmt),
                    show_val(&want, fmt)
                )
            });
            let wmin = o.brute_ulpmin(Op::Mul, z);
            mul.check(wmin == Some(got.neg()), || format!("ulpmin at z={}", lit(&z, fmt)));
        }
        if let Ok(got) = ulpmax_div(z, fmt) {
            let want = o.brute_ulpmax(Op::Div, z);
            div.check(want == Some(got), || {
                format!(
                    "z={}: formula {} brute {}",
                    lit(&z, fmt),
                    lit(&got, fmt),
                    show_val(&want, fmt)
                )
            });
            let wmin = o.brute_ulpmin(Op::Div, z);
            div.check(wmin == Some(got.neg()), || format!("ulpmin at z={}", lit(&z, fmt)));
        }
    }
    vec![add, mul, div]
}

fn show_val(v: &Option<FpVal>, fmt: &FpFormat) -> String {
    v.map_or("none".into(), |v| lit(&v, fmt))
}

fn mu_add_maximal(o: &Oracle, rule: MuRule) -> PropertyReport {
    let fmt = o.format();
    let unb = fmt.unbounded();
    let mut r = PropertyReport::new("mu-add-maximal");
    let pos: Vec<FpVal> = o
        .universe()
        .values()
        .iter()
        .copied()
        .filter(|v| v.is_positive() && v.is_finite())
        .collect();
    // beta and alpha of every positive z.
    let beta: Vec<FpVal> = pos.iter().map(|&z| ulpmax_add(z, fmt)).collect();
    let alpha: Vec<FpVal> = pos.iter().map(|&z| ulpmax_add(z.neg(), fmt)).collect();
    for i in 0..pos.len() {
        let (mut best_b, mut best_a) = (beta[i], alpha[i]);
        for j in i..pos.len() {
            best_b = best_b.max(beta[j]);
            best_a = best_a.max(alpha[j]);
            let iv = FpInterval::new(pos[i], pos[j]).unwrap();
            let mu = mu_add_with(&iv, fmt, rule);
            let mirrored = mu_add_with(&iv.negate(), fmt, rule);
            let ok = mu.is_some_and(|m| {
                iv.contains(&m)
                    && ulpmax_add(m, fmt) >= best_b
                    && ulpmax_add(m.neg(), fmt) >= best_a
                    && mirrored == Some(m.neg())
            });
            r.check(ok, || {
                format!(
                    "Z={}: mu={} but some z in Z reaches {}",
                    iv.display(fmt),
                    show_val(&mu, fmt),
                    lit(&best_b, &unb)
                )
            });
        }
    }
    r
}

fn ulpmax_monotone(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("ulpmax-monotone");
    type Bound = fn(FpVal, &FpFormat) -> Result<FpVal, crate::minifloat::FloatError>;
    let fs: [(&str, Bound); 2] = [("mul", ulpmax_mul), ("div", ulpmax_div)];
    for w in o.universe().values().windows(2) {
        let (a, b) = (w[0], w[1]);
        // Moving away from zero: (a, a^+) when positive, (b, b^-) when negative.
        let (inner, outer) = if a.is_positive() {
            (a, b)
        } else if b.is_negative() {
            (b, a)
        } else {
            continue;
        };
        for (name, f) in fs {
            if let (Ok(x), Ok(y)) = (f(inner, fmt), f(outer, fmt)) {
                r.check(y >= x, || {
                    format!("{name}: ulpmax({}) < ulpmax({})", lit(&outer, fmt), lit(&inner, fmt))
                });
            }
        }
    }
    r
}

fn mul_div_fmax_round_trip(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let mut r = PropertyReport::new("mul-div-fmax-round-trip");
    let fm = fmt.f_max();
    for &z in o.universe().values() {
        if z.is_finite() && z.abs() <= fmt.one() {
            let back = o.eval(Op::Mul, z, fm).and_then(|p| o.eval(Op::Div, p, fm));
            r.check(back == Some(z), || lit(&z, fmt));
        }
    }
    r
}

fn delta_div_bound(o: &Oracle) -> PropertyReport {
    let fmt = o.format();
    let one_plus = fmt.one().succ(fmt).unwrap();
    let mut r = PropertyReport::new("delta-div-bound");
    for &z in o.universe().values() {
        if !z.is_nonzero_finite() {
            continue;
        }
        let d = delta_div_second(z, fmt);
        let Some(m) = o.brute_max_divisor(z) else {
            continue;
        };
        let strict = z.abs() > one_plus;
        let ok = if strict { m < d } else { m <= d };
        r.check(ok, || {
            format!(
                "z={}: max divisor {} vs bound {}",
                lit(&z, fmt),
                lit(&m, fmt),
                lit(&d, fmt)
            )
        });
    }
    r
}

fn maxulp_interval_sound(o: &Oracle, rule: MuRule) -> PropertyReport {
    let fmt = o.format();
    let u = o.universe();
    let mut r = PropertyReport::new("maxulp-interval-sound");
    let pos: Vec<usize> = (0..u.len())
        .filter(|&i| u.get(i).is_positive() && u.get(i).is_finite())
        .collect();
    let neg: Vec<usize> = (0..u.len())
        .filter(|&i| u.get(i).is_negative() && u.get(i).is_finite())
        .collect();
    for op in Op::ALL {
        let sup = o.support(op);
        for side in [&pos, &neg] {
            for i in 0..side.len() {
                let mut hx: Option<(usize, usize)> = None;
                let mut hy: Option<(usize, usize)> = None;
                for j in i..side.len() {
                    if let Some(((a, b), (c, d))) = sup.of(side[j]) {
                        hx = Some(hx.map_or((a, b), |(p, q)| (p.min(a), q.max(b))));
                        hy = Some(hy.map_or((c, d), |(p, q)| (p.min(c), q.max(d))));
                    }
                    let z = FpInterval::new(u.get(side[i]), u.get(side[j])).unwrap();
                    let b = maxulp_bounds_with(op, &z, fmt, rule);
                    let inside = |iv: Option<FpInterval>, h: Option<(usize, usize)>| match (iv, h) {
                        (Some(iv), Some((lo, hi))) => iv.contains(&u.get(lo)) && iv.contains(&u.get(hi)),
                        _ => true,
                    };
                    r.check(inside(b.x, hx) && inside(b.y, hy), || {
                        format!(
                            "{op} Z={}: bounds x {} y {}",
                            z.display(fmt),
                            show(&b.x, fmt),
                            show(&b.y, fmt)
                        )
                    });
                }
            }
        }
    }
    r
}

/// With a finite zero-free partner the classical projection already
/// implies the max-ULP bound, up to one value at each end.
fn maxulp_subsumed(o: &Oracle, opts: &SuiteOptions) -> PropertyReport {
    let fmt = o.format();
    let n = o.universe().len();
    let mut r = PropertyReport::new("maxulp-subsumed-by-classic");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5ab5);
    let mut done = 0;
    while done < opts.classic_instances {
        let op = [Op::Mul, Op::Div][rng.gen_range(0..2)];
        let (z, x, y) = (
            random_iv(&mut rng, n, o),
            random_iv(&mut rng, n, o),
            random_iv(&mut rng, n, o),
        );
        if !z.is_finite_zero_free() || !y.is_finite_zero_free() {
            continue;
        }
        done += 1;
        let first = projections(op)[1].1;
        let Some(c) = first(&z, &x, &y, fmt).and_then(|c| c.intersect(&x).ok()) else {
            continue;
        };
        let b = maxulp_bounds_with(op, &z, fmt, MuRule::Corrected);
        // The classical bounds round the exact edge product to nearest, so
        // they may keep one extra value beyond the tight hull at each end.
        let ok = b.x.is_none_or(|bx| {
            let lo = bx.lo().pred(fmt).unwrap_or(bx.lo());
            let hi = bx.hi().succ(fmt).unwrap_or(bx.hi());
            FpInterval::new(lo, hi).unwrap().contains_interval(&c)
        });
        r.check(ok, || {
            format!("{op} z={} x={} y={}", z.display(fmt), x.display(fmt), y.display(fmt))
        });
    }
    r
}

fn brute_order_independent(o: &Oracle, seed: u64) -> PropertyReport {
    let u = o.universe();
    let fmt = o.format();
    let mut r = PropertyReport::new("brute-order-independent");
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    for op in [Op::Mul, Op::Div] {
        let t = o.table(op);
        let mut best: Vec<Option<usize>> = vec![None; u.len()];
        for &x in &order {
            for &y in order.iter().rev() {
                if let Some(z) = t.get(x, y) {
                    if best[z].is_none_or(|b| u.get(x) > u.get(b)) {
                        best[z] = Some(x);
                    }
                }
            }
        }
        for (zi, b) in best.iter().enumerate() {
            let z = u.get(zi);
            let want = o.brute_ulpmax(op, z);
            r.check(b.map(|b| u.get(b)) == want, || format!("{op} z={}", lit(&z, fmt)));
        }
    }
    r
}

fn engine_corpus(o: &Oracle, opts: &SuiteOptions) -> PropertyReport {
    let rep = run_corpus(o, opts.systems, opts.seed);
    let mut r = PropertyReport::new("engine-corpus");
    r.instances = rep.systems as u64;
    r.failures = (rep.discrepancies.len() + rep.ablation_violations.len()) as u64;
    r.counterexamples = rep
        .discrepancies
        .iter()
        .chain(&rep.ablation_violations)
        .take(MAX_COUNTEREXAMPLES)
        .cloned()
        .collect();
    r
}
