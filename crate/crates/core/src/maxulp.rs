//! Filtering by maximum ULP: bounds on the operands of `z = x op y` that
//! follow from how large an operand can be while still producing a given
//! result.
//!
//! The addition bounds live in the unbounded-exponent variant of the
//! format, where they are always defined; callers compare them against
//! `f_max` before use.

use crate::interval::{FpInterval, IntervalError};
use crate::minifloat::{add, div, mul, FloatError, FpFormat, FpVal, Op};

/// Which selection rule [`mu_add_with`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuRule {
    #[default]
    Corrected,
    /// The original rule that always sets the bit after the common prefix.
    /// Kept only so the test oracle can show that it is wrong.
    MarreMichel,
}

/// `(alpha, beta)` for a finite nonzero `z`, in `fmt.unbounded()`.
///
/// With `|z| = 1.b...b 0...0 x 2^e` in the unbounded format and `k` trailing
/// zero bits, `alpha = 1.1...1 x 2^(e+k)` and `beta = alpha + |z|`.
pub fn alpha_beta(z: FpVal, fmt: &FpFormat) -> Result<(FpVal, FpVal), FloatError> {
    if !z.is_nonzero_finite() {
        return Err(FloatError::OutOfDomain("alpha/beta"));
    }
    let unb = fmt.unbounded();
    let zh = z.abs().convert(fmt, &unb);
    let (m, e) = (zh.significand().expect("finite"), zh.exponent().expect("finite"));
    let k = m.trailing_zeros() as i32;
    let alpha = FpVal::finite(false, unb.max_significand(), e + k);
    let beta = add(alpha, zh, &unb).expect("finite sum");
    Ok((alpha, beta))
}

/// Greatest value that can appear as an operand of an addition yielding
/// `z`, in `fmt.unbounded()`.
pub fn ulpmax_add(z: FpVal, fmt: &FpFormat) -> FpVal {
    match z {
        FpVal::NegInf | FpVal::PosInf => FpVal::PosInf,
        _ if z.is_zero() => FpVal::pos_zero(&fmt.unbounded()),
        _ => {
            let (alpha, beta) = alpha_beta(z, fmt).expect("finite nonzero");
            if z.is_negative() {
                alpha
            } else {
                beta
            }
        }
    }
}

/// Least operand value, `-ulpmax_add(-z)`.
pub fn ulpmin_add(z: FpVal, fmt: &FpFormat) -> FpVal {
    ulpmax_add(z.neg(), fmt).neg()
}

/// An element of `z` maximising [`ulpmax_add`]; `None` outside the
/// applicable intervals (bounds of mixed sign, or touching zero or an
/// infinity).
pub fn mu_add(z: &FpInterval, fmt: &FpFormat) -> Option<FpVal> {
    mu_add_with(z, fmt, MuRule::Corrected)
}

pub fn mu_add_with(z: &FpInterval, fmt: &FpFormat, rule: MuRule) -> Option<FpVal> {
    if !z.is_finite_zero_free() {
        return None;
    }
    if z.lo().is_negative() {
        return mu_add_with(&z.negate(), fmt, rule).map(FpVal::neg);
    }
    let (lb, ub) = (z.lo(), z.hi());
    if lb == ub {
        return Some(lb);
    }
    let (lm, le) = (lb.significand()?, lb.exponent()?);
    let (um, ue) = (ub.significand()?, ub.exponent()?);
    if le != ue {
        return Some(FpVal::finite(false, fmt.hidden_bit(), ue));
    }
    let d = 127 - (lm ^ um).leading_zeros();
    let prefix = um & !((1u128 << (d + 1)) - 1);
    let set_bit = match rule {
        MuRule::Corrected => prefix != lm,
        MuRule::MarreMichel => true,
    };
    let m = if set_bit { prefix | (1u128 << d) } else { prefix };
    Some(FpVal::finite(false, m, ue))
}

/// `|z| <= f_max * f_min`, the domain of [`ulpmax_mul`] (plus finiteness).
pub fn in_mul_domain(z: FpVal, fmt: &FpFormat) -> bool {
    let Some(x) = z.abs().exact(fmt) else {
        return false;
    };
    let bound = fmt
        .f_max()
        .exact(fmt)
        .expect("finite")
        .mul(&fmt.f_min().exact(fmt).expect("finite"));
    x.num_cmp(&bound).is_le()
}

/// Greatest `|x|` with `x * y = z` for some `y`; defined for nonzero `z`
/// with `|z| / f_min <= f_max`.
pub fn ulpmax_mul(z: FpVal, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    if !z.is_nonzero_finite() || !in_mul_domain(z, fmt) {
        return Err(FloatError::OutOfDomain("ulpmax_mul"));
    }
    let a = z.abs();
    let q = div(a, fmt.f_min(), fmt).expect("finite quotient");
    if !a.is_subnormal(fmt) {
        return Ok(q);
    }
    let half = fmt.pow2(-1).ok_or(FloatError::OutOfDomain("ulpmax_mul"))?;
    let s = add(q, half, fmt).expect("finite sum");
    if a.is_even() {
        Ok(s)
    } else {
        s.num_pred(fmt)
    }
}

pub fn ulpmin_mul(z: FpVal, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    ulpmax_mul(z, fmt).map(FpVal::neg)
}

/// Greatest `|x|` with `x / y = z` for some `y`; defined for `|z| <= 1`.
pub fn ulpmax_div(z: FpVal, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    if !z.is_finite() {
        return Err(FloatError::OutOfDomain("ulpmax_div"));
    }
    let a = z.abs();
    if a > fmt.one() {
        return Err(FloatError::OutOfDomain("ulpmax_div"));
    }
    let scaled = mul(a, fmt.f_max(), fmt).expect("finite product");
    if a >= fmt.f_nor_min() {
        return Ok(scaled);
    }
    let two_q = fmt.pow2(fmt.q()).expect("2^q is representable");
    let bumped = add(scaled, two_q, fmt).expect("finite sum");
    let power_of_two = !a.is_zero() && a.significand().is_some_and(|m| m.is_power_of_two());
    let at_top = a.normalized_exponent(fmt) == Some(fmt.e_min() - 1);
    if !power_of_two || at_top {
        Ok(bumped)
    } else {
        bumped.num_pred(fmt)
    }
}

pub fn ulpmin_div(z: FpVal, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    ulpmax_div(z, fmt).map(FpVal::neg)
}

/// Upper bound on `|y|` for `z = x / y`: `f_max / pred(pred(|z|))` when
/// `1^+ < |z| <= f_max`, `f_max` otherwise.
pub fn delta_div_second(z: FpVal, fmt: &FpFormat) -> FpVal {
    let a = z.abs();
    let one_plus = fmt.one().succ(fmt).expect("1 is finite");
    if a > one_plus && a <= fmt.f_max() {
        let pp = a.num_pred(fmt).and_then(|v| v.num_pred(fmt)).expect("above one");
        div(fmt.f_max(), pp, fmt).expect("finite quotient")
    } else {
        fmt.f_max()
    }
}

/// Operand bounds derived from the result interval; `None` means no
/// information for that operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MaxUlpBounds {
    pub x: Option<FpInterval>,
    pub y: Option<FpInterval>,
}

fn sym(v: FpVal) -> FpInterval {
    FpInterval::new(v.neg(), v).expect("nonnegative bound")
}

fn back(v: FpVal, fmt: &FpFormat) -> FpVal {
    v.convert(&fmt.unbounded(), fmt)
}

/// `[ulpmin(zeta), ulpmax(zeta)]` for a positive `zeta`, if both ends are
/// finite in `fmt`.
fn add_window(zeta: FpVal, fmt: &FpFormat) -> Option<FpInterval> {
    let (alpha, beta) = alpha_beta(zeta, fmt).ok()?;
    let unb = fmt.unbounded();
    if beta > fmt.f_max().convert(fmt, &unb) {
        return None;
    }
    FpInterval::new(back(alpha, fmt).neg(), back(beta, fmt)).ok()
}

/// Bounds for `z = x op y` given only `Z`.
pub fn maxulp_bounds(op: Op, z: &FpInterval, fmt: &FpFormat) -> MaxUlpBounds {
    maxulp_bounds_with(op, z, fmt, MuRule::Corrected)
}

pub fn maxulp_bounds_with(op: Op, z: &FpInterval, fmt: &FpFormat, rule: MuRule) -> MaxUlpBounds {
    let mut out = MaxUlpBounds::default();
    if !z.is_finite_zero_free() {
        log::trace!("max-ULP skipped for {op}: result interval has a zero or an infinity");
        return out;
    }
    match op {
        Op::Add | Op::Sub => {
            let negative = z.lo().is_negative();
            let pos = if negative { z.negate() } else { *z };
            let Some(zeta) = mu_add_with(&pos, fmt, rule) else {
                return out;
            };
            let Some(w) = add_window(zeta, fmt) else {
                return out;
            };
            // w = [-alpha, beta] of the positive image.
            let w = if negative { w.negate() } else { w };
            out.x = Some(w);
            out.y = Some(if op == Op::Add { w } else { w.negate() });
        }
        Op::Mul => {
            let m = z.lo().abs().max(z.hi().abs());
            match ulpmax_mul(m, fmt) {
                Ok(u) => {
                    out.x = Some(sym(u));
                    out.y = Some(sym(u));
                }
                Err(_) => log::trace!("max-ULP skipped for {op}: result outside the product domain"),
            }
        }
        Op::Div => {
            let m = z.lo().abs().max(z.hi().abs());
            if m <= fmt.one() {
                if let Ok(u) = ulpmax_div(m, fmt) {
                    out.x = Some(sym(u));
                    out.y = Some(FpInterval::finite(fmt));
                }
            }
            let n = z.lo().abs().min(z.hi().abs());
            let d = sym(delta_div_second(n, fmt));
            out.y = Some(match out.y {
                Some(y) => y.intersect(&d).unwrap_or(d),
                None => d,
            });
        }
    }
    out
}

/// Intersect `x` and `y` with the max-ULP bounds for `z = x op y`.
pub fn apply_maxulp(
    op: Op,
    z: &FpInterval,
    x: &FpInterval,
    y: &FpInterval,
    fmt: &FpFormat,
) -> Result<(FpInterval, FpInterval), IntervalError> {
    let b = maxulp_bounds(op, z, fmt);
    let nx = match b.x {
        Some(bx) => x.intersect(&bx)?,
        None => *x,
    };
    let ny = match b.y {
        Some(by) => y.intersect(&by)?,
        None => *y,
    };
    Ok((nx, ny))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minifloat::{from_f64, parse_bit_literal};

    fn lit(s: &str, f: &FpFormat) -> FpVal {
        parse_bit_literal(s, f).unwrap()
    }

    #[test]
    fn alpha_beta_single_two() {
        let f = FpFormat::binary32();
        let (a, b) = alpha_beta(from_f64(2.0, &f), &f).unwrap();
        assert_eq!(back(a, &f), lit("1.11111111111111111111111e2^24", &f));
        assert_eq!(back(b, &f), lit("1e2^25", &f));
    }

    #[test]
    fn alpha_for_smallest_subnormal_is_normal() {
        let f = FpFormat::tiny();
        let (a, _) = alpha_beta(f.f_min(), &f).unwrap();
        assert_eq!(back(a, &f), FpVal::finite(false, 63, f.e_min()));
    }

    #[test]
    fn mu_add_cases() {
        let f = FpFormat::tiny();
        let v = |m, e| FpVal::finite(false, m, e);
        let iv = |a, b| FpInterval::new(a, b).unwrap();
        assert_eq!(mu_add(&iv(f.one(), v(32, 1)), &f), Some(v(32, 1)));
        // lb = 1.01000, ub = 1.01101: the prefix with zeros is lb itself.
        let z = iv(v(0b101000, 0), v(0b101101, 0));
        assert_eq!(mu_add(&z, &f), Some(v(0b101000, 0)));
        assert_eq!(mu_add_with(&z, &f, MuRule::MarreMichel), Some(v(0b101100, 0)));
        let z = iv(v(0b101001, 0), v(0b101101, 0));
        assert_eq!(mu_add(&z, &f), Some(v(0b101100, 0)));
        assert_eq!(mu_add(&iv(f.one(), f.one()), &f), Some(f.one()));
        let n = iv(v(0b101101, 0).neg(), v(0b101001, 0).neg());
        assert_eq!(mu_add(&n, &f), Some(v(0b101100, 0).neg()));
        assert_eq!(mu_add(&iv(f.one().neg(), f.one()), &f), None);
        assert_eq!(mu_add(&iv(FpVal::pos_zero(&f), f.one()), &f), None);
    }

    #[test]
    fn mul_bound_single() {
        let f = FpFormat::binary32();
        assert_eq!(ulpmax_mul(lit("1e2^-30", &f), &f).unwrap(), lit("1e2^119", &f));
        assert!(ulpmax_mul(FpVal::pos_zero(&f), &f).is_err());
        assert!(ulpmax_mul(f.one(), &f).is_err());
    }

    #[test]
    fn div_bounds_single() {
        let f = FpFormat::binary32();
        assert_eq!(
            ulpmax_div(lit("1e2^-110", &f), &f).unwrap(),
            lit("1.11111111111111111111111e2^17", &f)
        );
        assert!(ulpmax_div(f.one().succ(&f).unwrap(), &f).is_err());
        assert_eq!(
            delta_div_second(lit("1.00000000000000000000001e2^110", &f), &f),
            lit("1e2^18", &f)
        );
        assert_eq!(delta_div_second(f.one(), &f), f.f_max());
    }

    #[test]
    fn sub_swaps_second_operand() {
        let f = FpFormat::binary32();
        let z = FpInterval::new(f.one(), from_f64(2.0, &f)).unwrap();
        let b = maxulp_bounds(Op::Sub, &z, &f);
        let x = b.x.unwrap();
        assert_eq!(b.y.unwrap(), x.negate());
        assert_eq!(x.hi(), lit("1e2^25", &f));
    }

    #[test]
    fn no_bounds_for_intervals_with_infinity() {
        let f = FpFormat::binary32();
        let z = FpInterval::new(f.one(), FpVal::PosInf).unwrap();
        for op in Op::ALL {
            assert_eq!(maxulp_bounds(op, &z, &f), MaxUlpBounds::default());
        }
    }
}
