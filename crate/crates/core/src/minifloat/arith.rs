//! IEEE arithmetic with round-to-nearest-even, and the rounding-error
//! helpers the projections rely on.
//!
//! Every operation returns `None` when the IEEE result is NaN.

use num_bigint::BigUint;

use super::exact::ExactScaled;
use super::format::FpFormat;
use super::round::{round_exact, round_rational};
use super::value::FpVal;
use super::FloatError;

/// Binary arithmetic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

    pub fn eval(self, x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
        match self {
            Op::Add => add(x, y, fmt),
            Op::Sub => sub(x, y, fmt),
            Op::Mul => mul(x, y, fmt),
            Op::Div => div(x, y, fmt),
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
        }
    }
}

impl std::fmt::Display for Op {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.keyword())
    }
}

pub fn add(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    use FpVal::*;
    match (x, y) {
        (PosInf, NegInf) | (NegInf, PosInf) => None,
        (PosInf, _) | (_, PosInf) => Some(PosInf),
        (NegInf, _) | (_, NegInf) => Some(NegInf),
        _ => {
            let s = x.exact(fmt)?.add(&y.exact(fmt)?);
            Some(round_exact(&s, fmt))
        }
    }
}

pub fn sub(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    add(x, y.neg(), fmt)
}

pub fn mul(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    let negative = x.is_sign_negative() != y.is_sign_negative();
    if x.is_infinite() || y.is_infinite() {
        if x.is_zero() || y.is_zero() {
            return None;
        }
        return Some(FpVal::infinity(negative));
    }
    let p = x.exact(fmt)?.mul(&y.exact(fmt)?);
    if p.is_zero() {
        return Some(FpVal::zero(negative, fmt));
    }
    Some(round_exact(&p, fmt))
}

pub fn div(x: FpVal, y: FpVal, fmt: &FpFormat) -> Option<FpVal> {
    let negative = x.is_sign_negative() != y.is_sign_negative();
    match (x.is_infinite(), y.is_infinite()) {
        (true, true) => return None,
        (true, false) => return Some(FpVal::infinity(negative)),
        (false, true) => return Some(FpVal::zero(negative, fmt)),
        _ => {}
    }
    match (x.is_zero(), y.is_zero()) {
        (true, true) => return None,
        (false, true) => return Some(FpVal::infinity(negative)),
        (true, false) => return Some(FpVal::zero(negative, fmt)),
        _ => {}
    }
    let (mx, ex) = (x.significand()?, x.exponent()?);
    let (my, ey) = (y.significand()?, y.exponent()?);
    Some(
        round_rational(
            negative,
            &BigUint::from(mx),
            &BigUint::from(my),
            ex as i64 - ey as i64,
            fmt,
        )
        .value,
    )
}

/// Exact gap to the numeric successor, `z^+ - z`.
///
/// Zeros use `f_min`; at `f_max` the gap is taken as `2^(1-p+e_max)`, the
/// spacing the binade would have if it continued.
pub fn err_down(z: FpVal, fmt: &FpFormat) -> Result<ExactScaled, FloatError> {
    let FpVal::Finite { .. } = z else {
        return Err(FloatError::InfiniteOperand("rounding error bound"));
    };
    if fmt.is_unbounded() {
        return Err(FloatError::Unbounded("rounding error bound"));
    }
    if z.is_zero() {
        return Ok(fmt.f_min().exact(fmt).expect("finite"));
    }
    if z == fmt.f_max() {
        return Ok(ExactScaled::pow2(1 - fmt.precision() as i64 + fmt.e_max() as i64));
    }
    let s = z.num_succ(fmt)?;
    Ok(s.exact(fmt).expect("finite").sub(&z.exact(fmt).expect("finite")))
}

/// Exact gap to the numeric predecessor, `z - z^-`.
pub fn err_up(z: FpVal, fmt: &FpFormat) -> Result<ExactScaled, FloatError> {
    err_down(z.neg(), fmt)
}

/// Upper edge of the rounding interval of `z`: every real strictly below it
/// (and at or above `z`) rounds to `z` or lower. At `f_max` this is the
/// overflow threshold.
pub fn round_hi(z: FpVal, fmt: &FpFormat) -> Result<ExactScaled, FloatError> {
    let e = err_down(z, fmt)?;
    Ok(z.exact(fmt).expect("finite").add(&e.half()))
}

/// Lower edge of the rounding interval of `z`.
pub fn round_lo(z: FpVal, fmt: &FpFormat) -> Result<ExactScaled, FloatError> {
    let e = err_up(z, fmt)?;
    Ok(z.exact(fmt).expect("finite").sub(&e.half()))
}

/// Positive overflow threshold `f_max + 2^(e_max - p)`.
pub fn overflow_threshold(fmt: &FpFormat) -> ExactScaled {
    round_hi(fmt.f_max(), fmt).expect("bounded format")
}

/// Exact midpoint `(x + y) / 2` of two finite values.
pub fn mid(x: FpVal, y: FpVal, fmt: &FpFormat) -> Result<ExactScaled, FloatError> {
    match (x.exact(fmt), y.exact(fmt)) {
        (Some(a), Some(b)) => Ok(a.add(&b).half()),
        _ => Err(FloatError::InfiniteOperand("midpoint")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> FpFormat {
        FpFormat::tiny()
    }

    fn v(m: u128, e: i32) -> FpVal {
        FpVal::finite(false, m, e)
    }

    #[test]
    fn midpoints() {
        let f = t();
        let one = f.one();
        assert_eq!(mid(one, one, &f).unwrap(), one.exact(&f).unwrap());
        let s = one.succ(&f).unwrap();
        assert_eq!(mid(one, s, &f).unwrap(), ExactScaled::from_u128(false, 65, -6));
        assert_eq!(mid(one, v(0b100010, 0), &f).unwrap(), v(0b100001, 0).exact(&f).unwrap());
        assert!(mid(one, FpVal::PosInf, &f).is_err());
    }

    #[test]
    fn absorption_in_single() {
        let f = FpFormat::binary32();
        let big = super::super::from_f64(999999995904.0, &f);
        let small = super::super::from_f64(10000.0, &f);
        assert_eq!(add(big, small, &f), Some(big));
    }

    #[test]
    fn signed_zero_sums() {
        let f = t();
        let nz = FpVal::neg_zero(&f);
        let pz = FpVal::pos_zero(&f);
        assert_eq!(add(nz, nz, &f), Some(nz));
        assert_eq!(add(nz, pz, &f), Some(pz));
        let one = f.one();
        assert_eq!(add(one, one.neg(), &f), Some(pz));
        assert_eq!(sub(nz, pz, &f), Some(nz));
    }

    #[test]
    fn nan_cases() {
        let f = t();
        let z = FpVal::pos_zero(&f);
        assert_eq!(add(FpVal::PosInf, FpVal::NegInf, &f), None);
        assert_eq!(sub(FpVal::PosInf, FpVal::PosInf, &f), None);
        assert_eq!(mul(z, FpVal::NegInf, &f), None);
        assert_eq!(div(z, z, &f), None);
        assert_eq!(div(FpVal::PosInf, FpVal::NegInf, &f), None);
    }

    #[test]
    fn division_signs_and_limits() {
        let f = t();
        let z = FpVal::pos_zero(&f);
        assert_eq!(div(f.one().neg(), z, &f), Some(FpVal::NegInf));
        assert_eq!(div(f.one(), FpVal::NegInf, &f), Some(FpVal::neg_zero(&f)));
        // 1 / 3 in tiny: 0.0101010... -> 1.01011 x 2^-2 after rounding.
        let three = v(48, 1);
        assert_eq!(div(f.one(), three, &f), Some(v(0b101011, -2)));
    }

    #[test]
    fn mul_underflow_and_overflow() {
        let f = t();
        assert_eq!(mul(f.f_min(), f.f_min(), &f), Some(FpVal::pos_zero(&f)));
        assert_eq!(mul(f.f_max(), f.f_max(), &f), Some(FpVal::PosInf));
        let m = mul(f.f_min().neg(), f.f_min(), &f).unwrap();
        assert!(m.is_zero() && m.is_sign_negative());
    }

    #[test]
    fn error_bounds() {
        let f = t();
        let one_quantum = ExactScaled::pow2(-5);
        assert_eq!(err_down(f.one(), &f).unwrap(), one_quantum);
        assert_eq!(err_up(f.one(), &f).unwrap(), ExactScaled::pow2(-6));
        assert_eq!(err_down(FpVal::pos_zero(&f), &f).unwrap(), ExactScaled::pow2(-7));
        assert_eq!(err_down(f.f_max(), &f).unwrap(), ExactScaled::pow2(-2));
        assert_eq!(overflow_threshold(&f), ExactScaled::from_u128(false, 127, -3));
        assert!(err_down(FpVal::PosInf, &f).is_err());
    }

    #[test]
    fn binary64_matches_hardware() {
        let f = FpFormat::binary64();
        let samples = [0.1f64, -3.75, 1e300, 5e-324, 2.2250738585072014e-308, 7.0, -0.0];
        for &a in &samples {
            for &b in &samples {
                let (x, y) = (super::super::from_f64(a, &f), super::super::from_f64(b, &f));
                for (op, hw) in [(Op::Add, a + b), (Op::Sub, a - b), (Op::Mul, a * b), (Op::Div, a / b)] {
                    let got = op.eval(x, y, &f).map(|r| super::super::to_f64(&r, &f).unwrap());
                    match got {
                        None => assert!(hw.is_nan(), "{a} {op} {b}"),
                        Some(g) => assert_eq!(g.to_bits(), hw.to_bits(), "{a} {op} {b}"),
                    }
                }
            }
        }
    }
}
