//! Reference arithmetic: exact rational result, then one rounding step.
//!
//! Written independently of `minifloat::arith` so that comparing the two is
//! a meaningful check. Only the final rounding is shared.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::minifloat::{round_rational, FpFormat, FpVal, Op};

/// `(negative, magnitude, exponent)` with value `(-1)^s * magnitude * 2^exponent`.
fn split(v: FpVal, fmt: &FpFormat) -> (bool, BigUint, i64) {
    match v {
        FpVal::Finite {
            negative,
            significand,
            exponent,
        } => (
            negative,
            BigUint::from(significand),
            exponent as i64 + 1 - fmt.precision() as i64,
        ),
        _ => unreachable!("finite operand expected"),
    }
}

fn signed(neg: bool, m: BigUint) -> BigInt {
    BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, m)
}

fn round(neg: bool, mag: &BigUint, den: &BigUint, exp: i64, fmt: &FpFormat) -> FpVal {
    round_rational(neg, mag, den, exp, fmt).value
}

fn ref_add(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    let (xi, yi) = (x.is_infinite(), y.is_infinite());
    if xi && yi {
        return (x == y).then_some(x);
    }
    if xi {
        return Some(x);
    }
    if yi {
        return Some(y);
    }
    let (sx, mx, ex) = split(x, fmt);
    let (sy, my, ey) = split(y, fmt);
    let e = ex.min(ey);
    let a = signed(sx, mx << (ex - e) as usize);
    let b = signed(sy, my << (ey - e) as usize);
    let s = a + b;
    if s.is_zero() {
        // Exact zero sum: negative only when both addends are -0.
        return Some(FpVal::zero(sx && sy && x.is_zero() && y.is_zero(), fmt));
    }
    let (sign, mag) = s.into_parts();
    Some(round(sign == Sign::Minus, &mag, &BigUint::one(), e, fmt))
}

fn ref_mul(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    let neg = x.is_sign_negative() ^ y.is_sign_negative();
    if x.is_infinite() || y.is_infinite() {
        return (!x.is_zero() && !y.is_zero()).then_some(FpVal::infinity(neg));
    }
    let (_, mx, ex) = split(x, fmt);
    let (_, my, ey) = split(y, fmt);
    Some(round(neg, &(mx * my), &BigUint::one(), ex + ey, fmt))
}

fn ref_div(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    let neg = x.is_sign_negative() ^ y.is_sign_negative();
    if x.is_infinite() {
        return (!y.is_infinite()).then_some(FpVal::infinity(neg));
    }
    if y.is_infinite() {
        return Some(FpVal::zero(neg, fmt));
    }
    if y.is_zero() {
        return (!x.is_zero()).then_some(FpVal::infinity(neg));
    }
    let (_, mx, ex) = split(x, fmt);
    let (_, my, ey) = split(y, fmt);
    Some(round(neg, &mx, &my, ex - ey, fmt))
}

/// `x op y` by exact rational arithmetic; `None` for NaN.
pub fn reference_eval(op: Op, x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    match op {
        Op::Add => ref_add(x, y, fmt),
        Op::Sub => ref_add(x, y.neg(), fmt),
        Op::Mul => ref_mul(x, y, fmt),
        Op::Div => ref_div(x, y, fmt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minifloat::from_f64;

    #[test]
    fn special_cases() {
        let f = FpFormat::tiny();
        let (p, n) = (FpVal::pos_zero(&f), FpVal::neg_zero(&f));
        assert_eq!(reference_eval(Op::Add, n, n, &f), Some(n));
        assert_eq!(reference_eval(Op::Add, n, p, &f), Some(p));
        assert_eq!(reference_eval(Op::Sub, p, p, &f), Some(p));
        assert_eq!(reference_eval(Op::Add, FpVal::PosInf, FpVal::NegInf, &f), None);
        assert_eq!(reference_eval(Op::Mul, FpVal::PosInf, n, &f), None);
        assert_eq!(reference_eval(Op::Div, n, n, &f), None);
        assert_eq!(reference_eval(Op::Div, f.one(), n, &f), Some(FpVal::NegInf));
        assert_eq!(
            reference_eval(Op::Div, from_f64(1.0, &f), from_f64(3.0, &f), &f),
            Some(from_f64(0.3359375, &f))
        );
    }
}
