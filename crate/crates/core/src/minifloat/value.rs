//! Floating-point data in canonical (sign, significand, exponent) form.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use super::exact::ExactScaled;
use super::format::FpFormat;
use super::round::round_exact;
use super::FloatError;

/// One floating-point datum: an infinity, or a finite value
/// `(-1)^negative * significand * 2^(exponent + 1 - p)`.
///
/// Finite values are kept canonical: a normal value has
/// `significand >= 2^(p-1)`; subnormals and zeros sit at `exponent = e_min`.
/// NaN has no representation; operations report it as `None`.
///
/// `Ord` is the solver's total order
/// `-inf < -f_max < ... < -f_min < -0 < +0 < f_min < ... < +inf`.
#[derive(Debug, Clone, Copy)]
pub enum FpVal {
    NegInf,
    Finite {
        negative: bool,
        significand: u128,
        exponent: i32,
    },
    PosInf,
}

impl FpVal {
    /// Raw constructor; the caller is responsible for canonical form.
    pub const fn finite(negative: bool, significand: u128, exponent: i32) -> Self {
        FpVal::Finite {
            negative,
            significand,
            exponent,
        }
    }

    pub fn zero(negative: bool, fmt: &FpFormat) -> Self {
        FpVal::finite(negative, 0, fmt.e_min())
    }

    pub fn pos_zero(fmt: &FpFormat) -> Self {
        Self::zero(false, fmt)
    }

    pub fn neg_zero(fmt: &FpFormat) -> Self {
        Self::zero(true, fmt)
    }

    pub fn infinity(negative: bool) -> Self {
        if negative {
            FpVal::NegInf
        } else {
            FpVal::PosInf
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FpVal::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FpVal::Finite { significand: 0, .. })
    }

    pub fn is_nonzero_finite(&self) -> bool {
        self.is_finite() && !self.is_zero()
    }

    /// Sign bit: true for `-inf`, `-0` and negative finite values.
    pub fn is_sign_negative(&self) -> bool {
        match *self {
            FpVal::NegInf => true,
            FpVal::PosInf => false,
            FpVal::Finite { negative, .. } => negative,
        }
    }

    /// Strictly below zero numerically (`-0` is not negative here).
    pub fn is_negative(&self) -> bool {
        self.is_sign_negative() && !self.is_zero()
    }

    /// Strictly above zero numerically.
    pub fn is_positive(&self) -> bool {
        !self.is_sign_negative() && !self.is_zero()
    }

    pub fn significand(&self) -> Option<u128> {
        match *self {
            FpVal::Finite { significand, .. } => Some(significand),
            _ => None,
        }
    }

    pub fn exponent(&self) -> Option<i32> {
        match *self {
            FpVal::Finite { exponent, .. } => Some(exponent),
            _ => None,
        }
    }

    /// Flip the sign, zeros and infinities included.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        match self {
            FpVal::NegInf => FpVal::PosInf,
            FpVal::PosInf => FpVal::NegInf,
            FpVal::Finite {
                negative,
                significand,
                exponent,
            } => FpVal::Finite {
                negative: !negative,
                significand,
                exponent,
            },
        }
    }

    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// Least significant significand digit is 0. Only meaningful for finite
    /// nonzero values.
    pub fn is_even(&self) -> bool {
        matches!(self, FpVal::Finite { significand, .. } if significand & 1 == 0)
    }

    pub fn is_odd(&self) -> bool {
        matches!(self, FpVal::Finite { significand, .. } if significand & 1 == 1)
    }

    pub fn is_subnormal(&self, fmt: &FpFormat) -> bool {
        matches!(*self, FpVal::Finite { significand, .. }
            if significand != 0 && significand < fmt.hidden_bit())
    }

    /// Exponent of the leading one bit, i.e. the exponent of the value in
    /// the unbounded-exponent format (subnormals get exponents below
    /// `e_min`).
    pub fn normalized_exponent(&self, fmt: &FpFormat) -> Option<i32> {
        match *self {
            FpVal::Finite {
                significand, exponent, ..
            } if significand != 0 => {
                let bits = 128 - significand.leading_zeros();
                Some(exponent - (fmt.precision() - bits) as i32)
            }
            _ => None,
        }
    }

    /// The exact value, or `None` for infinities.
    pub fn exact(&self, fmt: &FpFormat) -> Option<ExactScaled> {
        match *self {
            FpVal::Finite {
                negative,
                significand,
                exponent,
            } => Some(ExactScaled::from_u128(
                negative,
                significand,
                exponent as i64 + 1 - fmt.precision() as i64,
            )),
            _ => None,
        }
    }

    /// Re-express a value in another format with rounding to nearest
    /// (exact when `to` contains the value).
    pub fn convert(self, from: &FpFormat, to: &FpFormat) -> FpVal {
        match self {
            FpVal::Finite {
                negative,
                significand: 0,
                ..
            } => FpVal::zero(negative, to),
            FpVal::Finite { .. } => {
                let x = self.exact(from).expect("finite");
                round_exact(&x, to)
            }
            inf => inf,
        }
    }

    /// Check canonical form with respect to `fmt`.
    pub fn validate(&self, fmt: &FpFormat) -> Result<(), FloatError> {
        let FpVal::Finite {
            significand, exponent, ..
        } = *self
        else {
            return Ok(());
        };
        if significand > fmt.max_significand() {
            return Err(FloatError::NotCanonical("significand too wide".into()));
        }
        if significand == 0 {
            return if exponent == fmt.e_min() {
                Ok(())
            } else {
                Err(FloatError::NotCanonical("zero off e_min".into()))
            };
        }
        if fmt.is_unbounded() {
            if significand < fmt.hidden_bit() {
                return Err(FloatError::NotCanonical("subnormal in unbounded format".into()));
            }
            return Ok(());
        }
        if exponent < fmt.e_min() || exponent > fmt.e_max() {
            return Err(FloatError::NotCanonical("exponent out of range".into()));
        }
        if significand < fmt.hidden_bit() && exponent != fmt.e_min() {
            return Err(FloatError::NotCanonical("unnormalized significand".into()));
        }
        Ok(())
    }

    /// Order successor over the total order (`succ(-0) = +0`).
    pub fn succ(&self, fmt: &FpFormat) -> Result<FpVal, FloatError> {
        match *self {
            FpVal::PosInf => Err(FloatError::NoSuccessor),
            FpVal::NegInf => {
                if fmt.is_unbounded() {
                    Err(FloatError::Unbounded("no largest finite value"))
                } else {
                    Ok(fmt.f_max().neg())
                }
            }
            FpVal::Finite {
                negative: true,
                significand: 0,
                ..
            } => Ok(FpVal::pos_zero(fmt)),
            FpVal::Finite {
                negative: false,
                significand: 0,
                ..
            } => {
                if fmt.is_unbounded() {
                    Err(FloatError::Unbounded("no smallest positive value"))
                } else {
                    Ok(fmt.f_min())
                }
            }
            FpVal::Finite {
                negative: false,
                significand,
                exponent,
            } => Ok(step_up(significand, exponent, false, fmt)),
            FpVal::Finite {
                negative: true,
                significand,
                exponent,
            } => step_down(significand, exponent, true, fmt),
        }
    }

    /// Order predecessor over the total order (`pred(+0) = -0`).
    pub fn pred(&self, fmt: &FpFormat) -> Result<FpVal, FloatError> {
        self.neg().succ(fmt).map(FpVal::neg)
    }

    /// Numeric successor `x^+`: the smallest value numerically greater.
    /// Both zeros map to `f_min`.
    pub fn num_succ(&self, fmt: &FpFormat) -> Result<FpVal, FloatError> {
        if self.is_zero() {
            return FpVal::pos_zero(fmt).succ(fmt);
        }
        self.succ(fmt)
    }

    /// Numeric predecessor `x^-`: the greatest value numerically smaller.
    pub fn num_pred(&self, fmt: &FpFormat) -> Result<FpVal, FloatError> {
        self.neg().num_succ(fmt).map(FpVal::neg)
    }

    /// Position in the total order of a bounded format: `+0` is 0, `-0` is
    /// -1, and consecutive values differ by one.
    pub fn order_key(&self, fmt: &FpFormat) -> i128 {
        debug_assert!(!fmt.is_unbounded());
        let h = fmt.hidden_bit() as i128;
        let top = ((fmt.e_max() - fmt.e_min() + 1) as i128) * h + h;
        let ord = match *self {
            FpVal::NegInf | FpVal::PosInf => top,
            FpVal::Finite {
                significand, exponent, ..
            } => {
                let m = significand as i128;
                if m < h {
                    m
                } else {
                    ((exponent - fmt.e_min() + 1) as i128) * h + (m - h)
                }
            }
        };
        if self.is_sign_negative() {
            -ord - 1
        } else {
            ord
        }
    }

    /// Inverse of [`FpVal::order_key`]; `None` outside the format.
    pub fn from_order_key(key: i128, fmt: &FpFormat) -> Option<FpVal> {
        let h = fmt.hidden_bit() as i128;
        let top = ((fmt.e_max() - fmt.e_min() + 1) as i128) * h + h;
        let (negative, ord) = if key < 0 { (true, -key - 1) } else { (false, key) };
        if ord > top {
            return None;
        }
        if ord == top {
            return Some(FpVal::infinity(negative));
        }
        if ord < h {
            return Some(FpVal::finite(negative, ord as u128, fmt.e_min()));
        }
        let binade = ord / h;
        Some(FpVal::finite(
            negative,
            (h + ord % h) as u128,
            fmt.e_min() + binade as i32 - 1,
        ))
    }

    /// Comparison on the real line: `-0` and `+0` are equal.
    pub fn num_cmp(&self, other: &FpVal) -> Ordering {
        if self.is_zero() && other.is_zero() {
            Ordering::Equal
        } else {
            self.cmp(other)
        }
    }

    pub fn num_eq(&self, other: &FpVal) -> bool {
        self.num_cmp(other) == Ordering::Equal
    }
}

/// Magnitude one step up; overflow yields an infinity of the given sign.
fn step_up(m: u128, e: i32, negative: bool, fmt: &FpFormat) -> FpVal {
    let (m, e) = if m == fmt.max_significand() {
        (fmt.hidden_bit(), e + 1)
    } else {
        (m + 1, e)
    };
    if !fmt.is_unbounded() && e > fmt.e_max() {
        return FpVal::infinity(negative);
    }
    FpVal::finite(negative, m, e)
}

/// Magnitude one step down (towards zero).
fn step_down(m: u128, e: i32, negative: bool, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    if m == fmt.hidden_bit() && (fmt.is_unbounded() || e > fmt.e_min()) {
        return Ok(FpVal::finite(negative, fmt.max_significand(), e - 1));
    }
    if m - 1 == 0 {
        return Ok(FpVal::zero(negative, fmt));
    }
    Ok(FpVal::finite(negative, m - 1, e))
}

/// Compare magnitudes of two canonical finite values of one format.
fn mag_cmp(m1: u128, e1: i32, m2: u128, e2: i32) -> Ordering {
    match (m1 == 0, m2 == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => e1.cmp(&e2).then(m1.cmp(&m2)),
    }
}

impl PartialEq for FpVal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FpVal {}

impl Hash for FpVal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match *self {
            FpVal::NegInf => 0u8.hash(state),
            FpVal::PosInf => 1u8.hash(state),
            FpVal::Finite {
                negative,
                significand,
                exponent,
            } => {
                2u8.hash(state);
                negative.hash(state);
                significand.hash(state);
                if significand != 0 {
                    exponent.hash(state);
                }
            }
        }
    }
}

impl PartialOrd for FpVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FpVal {
    fn cmp(&self, other: &Self) -> Ordering {
        use FpVal::*;
        match (*self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (
                Finite {
                    negative: n1,
                    significand: m1,
                    exponent: e1,
                },
                &Finite {
                    negative: n2,
                    significand: m2,
                    exponent: e2,
                },
            ) => match (n1, n2) {
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (false, false) => mag_cmp(m1, e1, m2, e2),
                (true, true) => mag_cmp(m2, e2, m1, e1),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> FpFormat {
        FpFormat::tiny()
    }

    #[test]
    fn succ_of_f_max_is_infinity() {
        let f = t();
        assert_eq!(f.f_max().succ(&f).unwrap(), FpVal::PosInf);
        let b = FpFormat::binary32();
        assert_eq!(b.f_max().succ(&b).unwrap(), FpVal::PosInf);
    }

    #[test]
    fn pred_of_neg_f_max_is_neg_infinity() {
        let f = t();
        assert_eq!(f.f_max().neg().pred(&f).unwrap(), FpVal::NegInf);
    }

    #[test]
    fn zeros_are_adjacent_in_total_order() {
        let f = t();
        assert_eq!(FpVal::neg_zero(&f).succ(&f).unwrap(), FpVal::pos_zero(&f));
        assert_eq!(FpVal::pos_zero(&f).pred(&f).unwrap(), FpVal::neg_zero(&f));
        assert!(FpVal::neg_zero(&f) < FpVal::pos_zero(&f));
        assert!(FpVal::neg_zero(&f).num_eq(&FpVal::pos_zero(&f)));
    }

    #[test]
    fn numeric_successor_skips_zero_twin() {
        let f = t();
        assert_eq!(FpVal::neg_zero(&f).num_succ(&f).unwrap(), f.f_min());
        assert_eq!(FpVal::pos_zero(&f).num_succ(&f).unwrap(), f.f_min());
        assert_eq!(f.f_min().neg().num_succ(&f).unwrap(), FpVal::neg_zero(&f));
        assert_eq!(FpVal::pos_zero(&f).num_pred(&f).unwrap(), f.f_min().neg());
    }

    #[test]
    fn binade_crossing() {
        let f = t();
        // 1.11111 x 2^0 -> 1.00000 x 2^1
        let a = FpVal::finite(false, 0b111111, 0);
        let b = FpVal::finite(false, 0b100000, 1);
        assert_eq!(a.succ(&f).unwrap(), b);
        assert_eq!(b.pred(&f).unwrap(), a);
        // largest subnormal -> smallest normal
        let sub = FpVal::finite(false, 0b11111, -2);
        assert_eq!(sub.succ(&f).unwrap(), f.f_nor_min());
        assert_eq!(f.f_nor_min().pred(&f).unwrap(), sub);
    }

    #[test]
    fn successor_errors() {
        let f = t();
        assert!(FpVal::PosInf.succ(&f).is_err());
        assert!(FpVal::NegInf.pred(&f).is_err());
        let u = f.unbounded();
        assert!(FpVal::pos_zero(&u).succ(&u).is_err());
    }

    #[test]
    fn zero_equality_ignores_stored_exponent() {
        assert_eq!(FpVal::finite(false, 0, -2), FpVal::finite(false, 0, 7));
        assert_ne!(FpVal::finite(false, 0, -2), FpVal::finite(true, 0, -2));
    }

    #[test]
    fn validate_rejects_noncanonical() {
        let f = t();
        assert!(FpVal::finite(false, 0b10000, 0).validate(&f).is_err());
        assert!(FpVal::finite(false, 0b10000, -2).validate(&f).is_ok());
        assert!(FpVal::finite(false, 0b100000, 4).validate(&f).is_err());
        assert!(FpVal::finite(false, 0b1000000, 0).validate(&f).is_err());
    }

    #[test]
    fn order_keys_are_consecutive() {
        let f = t();
        let mut v = FpVal::NegInf;
        let mut k = v.order_key(&f);
        assert_eq!(FpVal::pos_zero(&f).order_key(&f), 0);
        assert_eq!(FpVal::neg_zero(&f).order_key(&f), -1);
        while v != FpVal::PosInf {
            let n = v.succ(&f).unwrap();
            assert_eq!(n.order_key(&f), k + 1);
            assert_eq!(FpVal::from_order_key(k + 1, &f), Some(n));
            v = n;
            k += 1;
        }
        assert_eq!(k - FpVal::NegInf.order_key(&f) + 1, 450);
    }

    #[test]
    fn normalized_exponent_of_subnormal() {
        let f = t();
        assert_eq!(f.f_min().normalized_exponent(&f), Some(-7));
        assert_eq!(f.f_nor_min().normalized_exponent(&f), Some(-2));
    }
}
