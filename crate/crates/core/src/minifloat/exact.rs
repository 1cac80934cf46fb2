//! Exact dyadic rationals `(-1)^neg * sig * 2^exp`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

/// An exact binary value. The sign of a zero is carried so IEEE zero-sign
/// rules can be applied by the caller, but numerically both zeros compare
/// equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactScaled {
    pub negative: bool,
    pub sig: BigUint,
    pub exp: i64,
}

impl ExactScaled {
    pub fn new(negative: bool, sig: BigUint, exp: i64) -> Self {
        ExactScaled { negative, sig, exp }.normalized()
    }

    pub fn from_u128(negative: bool, sig: u128, exp: i64) -> Self {
        Self::new(negative, BigUint::from(sig), exp)
    }

    pub fn zero(negative: bool) -> Self {
        ExactScaled {
            negative,
            sig: BigUint::zero(),
            exp: 0,
        }
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        ExactScaled {
            negative: false,
            sig: BigUint::one(),
            exp: k,
        }
    }

    fn normalized(mut self) -> Self {
        if self.sig.is_zero() {
            self.exp = 0;
            return self;
        }
        if let Some(tz) = self.sig.trailing_zeros() {
            if tz > 0 {
                self.sig >>= tz;
                self.exp += tz as i64;
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.sig.is_zero()
    }

    pub fn neg(&self) -> Self {
        ExactScaled {
            negative: !self.negative,
            ..self.clone()
        }
    }

    pub fn abs(&self) -> Self {
        ExactScaled {
            negative: false,
            ..self.clone()
        }
    }

    /// Exponent of the leading one bit; `None` for zero.
    pub fn leading_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.sig.bits() as i64 - 1)
        }
    }

    fn signed(&self) -> BigInt {
        let sign = if self.negative { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, self.sig.clone())
    }

    fn from_signed(v: BigInt, exp: i64) -> Self {
        let (sign, mag) = v.into_parts();
        Self::new(sign == Sign::Minus, mag, exp)
    }

    /// Exact sum. A zero result is `+0` unless both operands are `-0`.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            return Self::zero(self.negative && other.negative);
        }
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = self.signed() << (self.exp - e) as usize;
        let b = other.signed() << (other.exp - e) as usize;
        Self::from_signed(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.negative != other.negative,
            &self.sig * &other.sig,
            self.exp + other.exp,
        )
    }

    /// Multiply by `2^k`.
    pub fn scale(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        ExactScaled {
            exp: self.exp + k,
            ..self.clone()
        }
    }

    pub fn half(&self) -> Self {
        self.scale(-1)
    }

    /// Numeric comparison; signed zeros are equal.
    pub fn num_cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if other.negative {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if self.negative {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => {}
        }
        match (self.negative, other.negative) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.mag_cmp(other),
            (true, true) => other.mag_cmp(self),
        }
    }

    fn mag_cmp(&self, other: &Self) -> Ordering {
        let la = self.leading_exponent();
        let lb = other.leading_exponent();
        if la != lb {
            return la.cmp(&lb);
        }
        let e = self.exp.min(other.exp);
        let a = &self.sig << (self.exp - e) as usize;
        let b = &other.sig << (other.exp - e) as usize;
        a.cmp(&b)
    }

    /// Lossy conversion, for diagnostics and tests.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return if self.negative { -0.0 } else { 0.0 };
        }
        let bits = self.sig.bits();
        let (top, shift) = if bits > 64 {
            let s = bits - 64;
            (
                (&self.sig >> s as usize).iter_u64_digits().next().unwrap_or(0),
                s as i64,
            )
        } else {
            (self.sig.iter_u64_digits().next().unwrap_or(0), 0)
        };
        let mag = (top as f64) * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32);
        if self.negative {
            -mag
        } else {
            mag
        }
    }
}

impl fmt::Display for ExactScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        write!(f, "{sign}{}*2^{}", self.sig, self.exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(neg: bool, m: u128, e: i64) -> ExactScaled {
        ExactScaled::from_u128(neg, m, e)
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        assert_eq!(x(false, 12, 0), x(false, 3, 2));
    }

    #[test]
    fn add_aligns_exponents() {
        assert_eq!(x(false, 1, 0).add(&x(false, 1, -3)), x(false, 9, -3));
        assert_eq!(x(false, 1, 0).add(&x(true, 1, 0)), ExactScaled::zero(false));
        assert!(ExactScaled::zero(true).add(&ExactScaled::zero(true)).negative);
    }

    #[test]
    fn compare_mixed_sign_and_zero() {
        assert_eq!(x(true, 5, 0).num_cmp(&x(false, 1, -9)), Ordering::Less);
        assert_eq!(
            ExactScaled::zero(true).num_cmp(&ExactScaled::zero(false)),
            Ordering::Equal
        );
        assert_eq!(x(true, 3, 0).num_cmp(&x(true, 1, 1)), Ordering::Less);
        assert_eq!(x(false, 3, 0).num_cmp(&x(false, 7, -1)), Ordering::Less);
    }

    #[test]
    fn product_sign_and_scale() {
        assert_eq!(x(true, 3, 1).mul(&x(true, 5, -2)), x(false, 15, -1));
        assert_eq!(x(false, 3, 1).to_f64(), 6.0);
    }
}
