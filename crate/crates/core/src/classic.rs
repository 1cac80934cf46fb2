//! Interval projections for `z = x op y` and for comparisons.
//!
//! Indirect projections over addition and subtraction invert the rounding
//! interval of the result bounds. Multiplication and division work per
//! sign class on magnitudes, treating zeros and infinities separately.
//! Every function returns the narrowed interval for its target, already
//! intersected with the incoming domain, or `None` when it is empty.

use serde::{Deserialize, Serialize};

use crate::interval::FpInterval;
use crate::minifloat::{
    add, div, mul, overflow_threshold, round_exact, round_hi, round_lo, round_rational, ExactScaled, FpFormat, FpVal,
    Op,
};

fn hull_opt(acc: Option<FpInterval>, next: Option<FpInterval>) -> Option<FpInterval> {
    match (acc, next) {
        (Some(a), Some(b)) => Some(a.hull(&b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn clip(a: FpVal, b: FpVal, within: &FpInterval) -> Option<FpInterval> {
    FpInterval::new(a, b).ok()?.intersect(within).ok()
}

fn ex(v: FpVal, fmt: &FpFormat) -> ExactScaled {
    v.exact(fmt).expect("finite bound")
}

/// Lower bound as a format value: a zero becomes `-0` so both zeros stay.
fn as_lower(v: FpVal, fmt: &FpFormat) -> FpVal {
    if v.is_zero() {
        FpVal::neg_zero(fmt)
    } else {
        v
    }
}

/// Upper bound as a format value: a zero becomes `+0`.
fn as_upper(v: FpVal, fmt: &FpFormat) -> FpVal {
    if v.is_zero() {
        FpVal::pos_zero(fmt)
    } else {
        v
    }
}

/// Round `a / b` for `a >= 0`, `b > 0`.
fn rdiv(a: &ExactScaled, b: &ExactScaled, fmt: &FpFormat) -> FpVal {
    round_rational(false, &a.sig, &b.sig, a.exp - b.exp, fmt).value
}

fn rmul(a: &ExactScaled, b: &ExactScaled, fmt: &FpFormat) -> FpVal {
    round_exact(&a.mul(b), fmt)
}

/// Bounds of `f` over `x * y` for `f` nondecreasing in `x` and monotone in
/// `y` (nondecreasing when `y_up`). Corners where `f` is NaN fall back to
/// their inner neighbours, which is exact for the IEEE operators because
/// each NaN corner is isolated.
fn mono_bounds(
    f: impl Fn(FpVal, FpVal) -> Option<FpVal>,
    x: &FpInterval,
    y: &FpInterval,
    y_up: bool,
    fmt: &FpFormat,
) -> Option<FpInterval> {
    let step = |v: FpVal, up: bool, within: &FpInterval| -> Option<FpVal> {
        let n = if up { v.succ(fmt) } else { v.pred(fmt) }.ok()?;
        within.contains(&n).then_some(n)
    };
    let (ylo, yhi) = if y_up { (y.lo(), y.hi()) } else { (y.hi(), y.lo()) };
    let lo = f(x.lo(), ylo).or_else(|| {
        let a = step(x.lo(), true, x).and_then(|xn| f(xn, ylo));
        let b = step(ylo, y_up, y).and_then(|yn| f(x.lo(), yn));
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    })?;
    let hi = f(x.hi(), yhi).or_else(|| {
        let a = step(x.hi(), false, x).and_then(|xn| f(xn, yhi));
        let b = step(yhi, !y_up, y).and_then(|yn| f(x.hi(), yn));
        match (a, b) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    })?;
    FpInterval::new(lo, hi).ok()
}

pub fn add_direct(x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    mono_bounds(|a, b| add(a, b, fmt), x, y, true, fmt)
}

/// Projection on `x` for `z = x + y`.
pub fn add_operand(z: &FpInterval, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    let f_max = fmt.f_max();
    let xf = x.finite_part(fmt);
    let yf = y.finite_part(fmt);
    let mut acc = None;

    if let (Some(zf), Some(xf), Some(yf)) = (z.finite_part(fmt), xf, yf) {
        let lo = round_lo(zf.lo(), fmt).expect("finite").sub(&ex(yf.hi(), fmt));
        let hi = round_hi(zf.hi(), fmt).expect("finite").sub(&ex(yf.lo(), fmt));
        let lo = as_lower(round_exact(&lo, fmt), fmt);
        let hi = as_upper(round_exact(&hi, fmt), fmt);
        acc = hull_opt(acc, clip(lo, hi, &xf));
    }

    let t = overflow_threshold(fmt);
    if z.hi() == FpVal::PosInf {
        if x.hi() == FpVal::PosInf && y.hi() != FpVal::NegInf {
            acc = hull_opt(acc, Some(FpInterval::singleton(FpVal::PosInf)));
        }
        if y.hi() == FpVal::PosInf {
            acc = hull_opt(acc, clip(f_max.neg(), FpVal::PosInf, x));
        }
        if let (Some(xf), Some(yf)) = (xf, yf) {
            let lo = round_exact(&t.sub(&ex(yf.hi(), fmt)), fmt);
            acc = hull_opt(acc, clip(as_lower(lo, fmt), f_max, &xf));
        }
    }
    if z.lo() == FpVal::NegInf {
        if x.lo() == FpVal::NegInf && y.lo() != FpVal::PosInf {
            acc = hull_opt(acc, Some(FpInterval::singleton(FpVal::NegInf)));
        }
        if y.lo() == FpVal::NegInf {
            acc = hull_opt(acc, clip(FpVal::NegInf, f_max, x));
        }
        if let (Some(xf), Some(yf)) = (xf, yf) {
            let hi = round_exact(&t.neg().sub(&ex(yf.lo(), fmt)), fmt);
            acc = hull_opt(acc, clip(f_max.neg(), as_upper(hi, fmt), &xf));
        }
    }
    acc?.intersect(x).ok()
}

pub fn sub_direct(x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    add_direct(x, &y.negate(), fmt)
}

/// Projection on `x` for `z = x - y`.
pub fn sub_first(z: &FpInterval, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    add_operand(z, x, &y.negate(), fmt)
}

/// Projection on `y` for `z = x - y`.
pub fn sub_second(z: &FpInterval, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    add_operand(z, &y.negate(), x, fmt).map(|v| v.negate())
}

/// Split into `(sign, magnitudes)` pieces; magnitudes lie in `[+0, +inf]`.
fn sign_parts(v: &FpInterval, fmt: &FpFormat) -> Vec<(bool, FpInterval)> {
    let mut out = Vec::with_capacity(2);
    if let Some(n) = v.negative_part(fmt) {
        out.push((true, n.negate()));
    }
    if let Some(p) = v.positive_part(fmt) {
        out.push((false, p));
    }
    out
}

fn signed(negative: bool, mag: FpInterval) -> FpInterval {
    if negative {
        mag.negate()
    } else {
        mag
    }
}

fn part_with_sign(v: &FpInterval, negative: bool, fmt: &FpFormat) -> Option<FpInterval> {
    if negative {
        v.negative_part(fmt).map(|n| n.negate())
    } else {
        v.positive_part(fmt)
    }
}

fn magnitude_direct(op: Op, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    let mut acc = None;
    for (sx, mx) in sign_parts(x, fmt) {
        for (sy, my) in sign_parts(y, fmt) {
            let r = match op {
                Op::Mul => mono_bounds(|a, b| mul(a, b, fmt), &mx, &my, true, fmt),
                Op::Div => mono_bounds(|a, b| div(a, b, fmt), &mx, &my, false, fmt),
                _ => unreachable!("magnitude operators only"),
            };
            acc = hull_opt(acc, r.map(|m| signed(sx != sy, m)));
        }
    }
    acc
}

pub fn mul_direct(x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    magnitude_direct(Op::Mul, x, y, fmt)
}

pub fn div_direct(x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    magnitude_direct(Op::Div, x, y, fmt)
}

/// Shared data for a magnitude projection: the finite part of each
/// magnitude interval and the exact rounding edges of the result.
struct MagCtx<'a> {
    fmt: &'a FpFormat,
    /// Finite magnitudes of the operand being narrowed.
    tf: Option<FpInterval>,
    /// Finite magnitudes of the other operand.
    of: Option<FpInterval>,
    /// Exact lower edge of the finite results (`None` when none are finite,
    /// zero when `+0` is a result).
    lo_edge: Option<ExactScaled>,
    hi_edge: Option<ExactScaled>,
    t: ExactScaled,
}

impl<'a> MagCtx<'a> {
    fn new(mz: &FpInterval, target: &FpInterval, other: &FpInterval, fmt: &'a FpFormat) -> Self {
        let zf = mz.finite_part(fmt);
        let (lo_edge, hi_edge) = match zf {
            Some(zf) => {
                let lo = if zf.lo().is_zero() {
                    ExactScaled::zero(false)
                } else {
                    round_lo(zf.lo(), fmt).expect("finite")
                };
                (Some(lo), Some(round_hi(zf.hi(), fmt).expect("finite")))
            }
            None => (None, None),
        };
        MagCtx {
            fmt,
            tf: target.finite_part(fmt),
            of: other.finite_part(fmt),
            lo_edge,
            hi_edge,
            t: overflow_threshold(fmt),
        }
    }

    fn ex(&self, v: FpVal) -> ExactScaled {
        ex(v, self.fmt)
    }

    fn f_min(&self) -> FpVal {
        self.fmt.f_min()
    }

    fn f_max(&self) -> FpVal {
        self.fmt.f_max()
    }

    /// Nonzero part of a finite magnitude interval.
    fn nonzero(&self, v: Option<FpInterval>) -> Option<FpInterval> {
        v?.intersect(&FpInterval::new(self.f_min(), FpVal::PosInf).ok()?).ok()
    }

    fn cap(&self, v: FpVal) -> FpVal {
        v.min(self.f_max())
    }
}

/// Magnitudes of `x` for `z = x * y` (also serves `y` by symmetry).
fn mul_operand_mag(mz: &FpInterval, mx: &FpInterval, my: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    let c = MagCtx::new(mz, mx, my, fmt);
    let mut acc = None;
    if let (Some(l), Some(u), Some(xf), Some(yf)) = (&c.lo_edge, &c.hi_edge, c.tf, c.of) {
        let (ylo, yhi) = (yf.lo(), yf.hi());
        let lower = if l.is_zero() {
            Some(FpVal::pos_zero(fmt))
        } else if yhi.is_zero() {
            None
        } else {
            Some(rdiv(l, &c.ex(yhi), fmt))
        };
        let upper = if ylo.is_zero() {
            c.f_max()
        } else {
            c.cap(rdiv(u, &c.ex(ylo), fmt))
        };
        if let Some(lower) = lower {
            acc = hull_opt(acc, clip(lower, upper, &xf));
        }
    }
    if mz.hi() == FpVal::PosInf {
        if mx.hi() == FpVal::PosInf && my.hi() > FpVal::pos_zero(fmt) {
            acc = hull_opt(acc, Some(FpInterval::singleton(FpVal::PosInf)));
        }
        if my.hi() == FpVal::PosInf {
            acc = hull_opt(acc, clip(c.f_min(), FpVal::PosInf, mx));
        }
        if let (Some(xf), Some(ynz)) = (c.tf, c.nonzero(c.of)) {
            let lower = rdiv(&c.t, &c.ex(ynz.hi()), fmt);
            acc = hull_opt(acc, clip(lower, c.f_max(), &xf));
        }
    }
    acc?.intersect(mx).ok()
}

/// Magnitudes of `x` for `z = x / y`.
fn div_first_mag(mz: &FpInterval, mx: &FpInterval, my: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    let c = MagCtx::new(mz, mx, my, fmt);
    let mut acc = None;
    if let (Some(l), Some(u), Some(xf)) = (&c.lo_edge, &c.hi_edge, c.tf) {
        if let Some(ynz) = c.nonzero(c.of) {
            let lower = if l.is_zero() {
                FpVal::pos_zero(fmt)
            } else {
                rmul(l, &c.ex(ynz.lo()), fmt)
            };
            let upper = c.cap(rmul(u, &c.ex(ynz.hi()), fmt));
            acc = hull_opt(acc, clip(lower, upper, &xf));
        }
        if l.is_zero() && my.hi() == FpVal::PosInf {
            acc = hull_opt(acc, Some(xf));
        }
    }
    if mz.hi() == FpVal::PosInf {
        if mx.hi() == FpVal::PosInf && c.of.is_some() {
            acc = hull_opt(acc, Some(FpInterval::singleton(FpVal::PosInf)));
        }
        if my.lo().is_zero() {
            acc = hull_opt(acc, c.nonzero(c.tf));
        }
        if let (Some(xf), Some(ynz)) = (c.tf, c.nonzero(c.of)) {
            let lower = rmul(&c.t, &c.ex(ynz.lo()), fmt);
            acc = hull_opt(acc, clip(lower, c.f_max(), &xf));
        }
    }
    acc?.intersect(mx).ok()
}

/// Magnitudes of `y` for `z = x / y`.
fn div_second_mag(mz: &FpInterval, mx: &FpInterval, my: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    let c = MagCtx::new(mz, my, mx, fmt);
    let mut acc = None;
    if let (Some(l), Some(u), Some(xf)) = (&c.lo_edge, &c.hi_edge, c.of) {
        if let Some(ynz) = c.nonzero(c.tf) {
            let lower = rdiv(&c.ex(xf.lo()), u, fmt);
            let upper = if l.is_zero() {
                c.f_max()
            } else {
                c.cap(rdiv(&c.ex(xf.hi()), l, fmt))
            };
            acc = hull_opt(acc, clip(lower, upper, &ynz));
        }
        if l.is_zero() && my.hi() == FpVal::PosInf {
            acc = hull_opt(acc, Some(FpInterval::singleton(FpVal::PosInf)));
        }
    }
    if mz.hi() == FpVal::PosInf {
        if mx.hi() == FpVal::PosInf {
            acc = hull_opt(acc, c.tf);
        }
        if my.lo().is_zero() && c.nonzero(c.of).is_some() {
            acc = hull_opt(acc, Some(FpInterval::singleton(FpVal::pos_zero(fmt))));
        }
        if let (Some(xnz), Some(ynz)) = (c.nonzero(c.of), c.nonzero(c.tf)) {
            let upper = rdiv(&c.ex(xnz.hi()), &c.t, fmt);
            acc = hull_opt(acc, clip(ynz.lo(), upper, &ynz));
        }
    }
    acc?.intersect(my).ok()
}

type MagFn = fn(&FpInterval, &FpInterval, &FpInterval, &FpFormat) -> Option<FpInterval>;

/// Run a magnitude projection over every sign combination. `target_first`
/// says whether the narrowed operand is the first factor.
fn signed_projection(
    f: MagFn,
    z: &FpInterval,
    target: &FpInterval,
    other: &FpInterval,
    target_first: bool,
    fmt: &FpFormat,
) -> Option<FpInterval> {
    let mut acc = None;
    for (st, mt) in sign_parts(target, fmt) {
        for (so, mo) in sign_parts(other, fmt) {
            let Some(mz) = part_with_sign(z, st != so, fmt) else {
                continue;
            };
            let r = if target_first {
                f(&mz, &mt, &mo, fmt)
            } else {
                f(&mz, &mo, &mt, fmt)
            };
            acc = hull_opt(acc, r.map(|m| signed(st, m)));
        }
    }
    acc
}

/// Projection on `x` for `z = x * y`; call with operands swapped for `y`.
pub fn mul_operand(z: &FpInterval, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    signed_projection(mul_operand_mag, z, x, y, true, fmt)
}

/// Projection on `x` for `z = x / y`.
pub fn div_first(z: &FpInterval, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    signed_projection(div_first_mag, z, x, y, true, fmt)
}

/// Projection on `y` for `z = x / y`.
pub fn div_second(z: &FpInterval, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<FpInterval> {
    signed_projection(div_second_mag, z, y, x, false, fmt)
}

/// Comparison relations, evaluated on the real line (`-0 == +0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, a: &FpVal, b: &FpVal) -> bool {
        let o = a.num_cmp(b);
        match self {
            Cmp::Lt => o.is_lt(),
            Cmp::Le => o.is_le(),
            Cmp::Eq => o.is_eq(),
            Cmp::Ge => o.is_ge(),
            Cmp::Gt => o.is_gt(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "==",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Cmp> {
        Some(match s {
            "<" => Cmp::Lt,
            "<=" => Cmp::Le,
            "==" => Cmp::Eq,
            ">=" => Cmp::Ge,
            ">" => Cmp::Gt,
            _ => return None,
        })
    }
}

fn num_max(a: FpVal, b: FpVal) -> FpVal {
    if a.num_cmp(&b).is_ge() {
        a
    } else {
        b
    }
}

fn num_min(a: FpVal, b: FpVal) -> FpVal {
    if a.num_cmp(&b).is_le() {
        a
    } else {
        b
    }
}

/// Narrow both sides of `x rel y`; `None` when no pair satisfies it.
pub fn clip_compare(rel: Cmp, x: &FpInterval, y: &FpInterval, fmt: &FpFormat) -> Option<(FpInterval, FpInterval)> {
    match rel {
        Cmp::Gt => return clip_compare(Cmp::Lt, y, x, fmt).map(|(a, b)| (b, a)),
        Cmp::Ge => return clip_compare(Cmp::Le, y, x, fmt).map(|(a, b)| (b, a)),
        _ => {}
    }
    let (x_hi, y_lo) = match rel {
        Cmp::Lt => (
            as_upper(y.hi().num_pred(fmt).ok()?, fmt),
            as_lower(x.lo().num_succ(fmt).ok()?, fmt),
        ),
        Cmp::Le => (as_upper(y.hi(), fmt), as_lower(x.lo(), fmt)),
        Cmp::Eq => {
            let lo = as_lower(num_max(x.lo(), y.lo()), fmt);
            let hi = as_upper(num_min(x.hi(), y.hi()), fmt);
            let both = FpInterval::new(lo, hi).ok()?;
            return Some((x.intersect(&both).ok()?, y.intersect(&both).ok()?));
        }
        _ => unreachable!(),
    };
    let nx = x.intersect(&FpInterval::new(FpVal::NegInf, x_hi).ok()?).ok()?;
    let ny = y.intersect(&FpInterval::new(y_lo, FpVal::PosInf).ok()?).ok()?;
    Some((nx, ny))
}
