//! Round-to-nearest, ties-to-even, into a format.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::exact::ExactScaled;
use super::format::FpFormat;
use super::value::FpVal;

/// A rounded value and whether rounding lost information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rounded {
    pub value: FpVal,
    pub inexact: bool,
}

/// Round `(-1)^negative * (sig + s) * 2^exp` where `s` is zero when `sticky`
/// is false and lies strictly inside `(0, 1)` otherwise.
///
/// With `sticky` set the caller must supply at least two bits below the
/// target quantum, which holds whenever `sig` carries `p + 2` or more bits.
pub fn round_bits(negative: bool, sig: &BigUint, exp: i64, sticky: bool, fmt: &FpFormat) -> Rounded {
    if sig.is_zero() {
        return Rounded {
            value: FpVal::zero(negative, fmt),
            inexact: sticky,
        };
    }
    let p = fmt.precision() as i64;
    let lead = exp + sig.bits() as i64 - 1;
    let mut e = if fmt.is_unbounded() {
        lead
    } else {
        lead.max(fmt.e_min() as i64)
    };
    let quantum = e + 1 - p;
    let shift = quantum - exp;
    let (mut m, inexact) = if shift <= 0 {
        debug_assert!(!sticky || shift < 0, "sticky rounding needs guard bits");
        ((sig << (-shift) as usize).to_u128().expect("fits in p bits"), sticky)
    } else {
        let shift = shift as usize;
        let kept = sig >> shift;
        let rem = sig - (&kept << shift);
        let half = BigUint::from(1u8) << (shift - 1);
        let mut m = kept.to_u128().expect("fits in p bits");
        let up = match rem.cmp(&half) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => sticky || m & 1 == 1,
            std::cmp::Ordering::Less => false,
        };
        if up {
            m += 1;
        }
        (m, sticky || !rem.is_zero())
    };
    if m == 1u128 << p {
        m = fmt.hidden_bit();
        e += 1;
    }
    if m == 0 {
        return Rounded {
            value: FpVal::zero(negative, fmt),
            inexact,
        };
    }
    if !fmt.is_unbounded() && e > fmt.e_max() as i64 {
        return Rounded {
            value: FpVal::infinity(negative),
            inexact: true,
        };
    }
    let e = i32::try_from(e).expect("exponent within i32");
    Rounded {
        value: FpVal::finite(negative, m, e),
        inexact,
    }
}

/// Round an exact value. A zero keeps the sign it carries.
pub fn round_exact(x: &ExactScaled, fmt: &FpFormat) -> FpVal {
    round_bits(x.negative, &x.sig, x.exp, false, fmt).value
}

/// Round `(-1)^negative * num / den * 2^exp`.
pub fn round_rational(negative: bool, num: &BigUint, den: &BigUint, exp: i64, fmt: &FpFormat) -> Rounded {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return Rounded {
            value: FpVal::zero(negative, fmt),
            inexact: false,
        };
    }
    let want = fmt.precision() as i64 + 3;
    let k = (want + den.bits() as i64 - num.bits() as i64 + 1).max(0);
    let (q, r) = (num << k as usize).div_rem(den);
    round_bits(negative, &q, exp - k, !r.is_zero(), fmt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> FpFormat {
        FpFormat::tiny()
    }

    fn r(neg: bool, m: u128, e: i64) -> FpVal {
        round_bits(neg, &BigUint::from(m), e, false, &tiny()).value
    }

    #[test]
    fn exact_values_are_kept() {
        assert_eq!(r(false, 1, 0), tiny().one());
        assert_eq!(r(false, 63, -2), tiny().f_max());
        assert_eq!(r(false, 1, -7), tiny().f_min());
    }

    #[test]
    fn ties_go_to_even() {
        // 65 * 2^-6 = 1.015625: midway between 1 and 1 + 2^-5.
        assert_eq!(r(false, 65, -6), tiny().one());
        // 67 * 2^-6 ties between 33 and 34 ulps; even is 34.
        assert_eq!(r(false, 67, -6), FpVal::finite(false, 34, 0));
    }

    #[test]
    fn sticky_breaks_ties_upward() {
        let v = round_bits(false, &BigUint::from(65u32 * 4), -8, true, &tiny());
        assert_eq!(v.value, FpVal::finite(false, 33, 0));
        assert!(v.inexact);
    }

    #[test]
    fn overflow_threshold() {
        // f_max = 63 * 2^-2; the threshold is 63.5 * 2^-2 = 127 * 2^-3.
        assert_eq!(r(false, 127, -3), FpVal::PosInf);
        assert_eq!(r(false, 253, -4), tiny().f_max());
        assert_eq!(r(true, 127, -3), FpVal::NegInf);
    }

    #[test]
    fn underflow_keeps_sign() {
        // Exactly half of f_min ties to zero.
        let v = r(true, 1, -8);
        assert!(v.is_zero() && v.is_sign_negative());
        assert_eq!(r(false, 3, -9), tiny().f_min());
    }

    #[test]
    fn carry_into_next_binade() {
        // 127 * 2^-6 rounds to 2.0.
        assert_eq!(r(false, 127, -6), FpVal::finite(false, 32, 1));
        // Largest subnormal plus half ulp rounds to f_nor_min.
        assert_eq!(r(false, 63, -8), tiny().f_nor_min());
    }

    #[test]
    fn rational_thirds() {
        let f = FpFormat::binary64();
        let v = round_rational(false, &BigUint::from(1u8), &BigUint::from(3u8), 0, &f);
        assert!(v.inexact);
        assert_eq!(crate::minifloat::to_f64(&v.value, &f), Some(1.0 / 3.0));
    }
}
