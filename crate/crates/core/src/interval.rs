//! Closed intervals over the total order of floating-point values.

use std::fmt;

use crate::minifloat::{parse_literal, to_bit_literal, FloatError, FpFormat, FpVal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("empty interval")]
    Empty,
    #[error("cannot split a singleton")]
    Singleton,
    #[error("interval syntax: {0}")]
    Syntax(String),
    #[error(transparent)]
    Float(#[from] FloatError),
}

/// `[lo, hi]` with `lo <= hi` in the total order. `{-0}` and `{+0}` are
/// distinct singletons; `[-0, +0]` holds both zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpInterval {
    lo: FpVal,
    hi: FpVal,
}

impl FpInterval {
    pub fn new(lo: FpVal, hi: FpVal) -> Result<Self, IntervalError> {
        if lo > hi {
            Err(IntervalError::Empty)
        } else {
            Ok(FpInterval { lo, hi })
        }
    }

    pub fn singleton(v: FpVal) -> Self {
        FpInterval { lo: v, hi: v }
    }

    /// `[-inf, +inf]`.
    pub fn full() -> Self {
        FpInterval {
            lo: FpVal::NegInf,
            hi: FpVal::PosInf,
        }
    }

    /// `[-f_max, f_max]`.
    pub fn finite(fmt: &FpFormat) -> Self {
        FpInterval {
            lo: fmt.f_max().neg(),
            hi: fmt.f_max(),
        }
    }

    pub fn lo(&self) -> FpVal {
        self.lo
    }

    pub fn hi(&self) -> FpVal {
        self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &FpVal) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_interval(&self, other: &FpInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &FpInterval) -> Result<FpInterval, IntervalError> {
        FpInterval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &FpInterval) -> FpInterval {
        FpInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// `{-v : v in self}`.
    pub fn negate(&self) -> FpInterval {
        FpInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn has_infinity(&self) -> bool {
        self.lo == FpVal::NegInf || self.hi == FpVal::PosInf
    }

    pub fn has_zero(&self) -> bool {
        self.lo.num_cmp(&FpVal::finite(false, 0, 0)).is_le() && self.hi.num_cmp(&FpVal::finite(false, 0, 0)).is_ge()
    }

    /// Every element is finite and nonzero, and all share one sign.
    pub fn is_finite_zero_free(&self) -> bool {
        !self.has_infinity() && !self.has_zero()
    }

    /// The elements with the sign bit clear (`+0` up to `+inf`).
    pub fn positive_part(&self, fmt: &FpFormat) -> Option<FpInterval> {
        self.intersect(&FpInterval {
            lo: FpVal::pos_zero(fmt),
            hi: FpVal::PosInf,
        })
        .ok()
    }

    /// The elements with the sign bit set (`-inf` up to `-0`).
    pub fn negative_part(&self, fmt: &FpFormat) -> Option<FpInterval> {
        self.intersect(&FpInterval {
            lo: FpVal::NegInf,
            hi: FpVal::neg_zero(fmt),
        })
        .ok()
    }

    /// The finite elements.
    pub fn finite_part(&self, fmt: &FpFormat) -> Option<FpInterval> {
        self.intersect(&FpInterval::finite(fmt)).ok()
    }

    /// Number of format values in the interval.
    pub fn count(&self, fmt: &FpFormat) -> u128 {
        (self.hi.order_key(fmt) - self.lo.order_key(fmt) + 1) as u128
    }

    /// Split at the order midpoint; the left half gets the extra element
    /// when the count is odd.
    pub fn split(&self, fmt: &FpFormat) -> Result<(FpInterval, FpInterval), IntervalError> {
        if self.is_singleton() {
            return Err(IntervalError::Singleton);
        }
        let lo = self.lo.order_key(fmt);
        let hi = self.hi.order_key(fmt);
        let mid = lo + (hi - lo) / 2;
        let left_hi = FpVal::from_order_key(mid, fmt).expect("inside format");
        let right_lo = FpVal::from_order_key(mid + 1, fmt).expect("inside format");
        Ok((
            FpInterval {
                lo: self.lo,
                hi: left_hi,
            },
            FpInterval {
                lo: right_lo,
                hi: self.hi,
            },
        ))
    }

    /// Elements in increasing order; only sensible for small intervals.
    pub fn iter(&self, fmt: &FpFormat) -> impl Iterator<Item = FpVal> + '_ {
        let fmt = *fmt;
        let lo = self.lo.order_key(&fmt);
        let hi = self.hi.order_key(&fmt);
        (lo..=hi).map(move |k| FpVal::from_order_key(k, &fmt).expect("inside format"))
    }

    pub fn display<'a>(&'a self, fmt: &'a FpFormat) -> IntervalDisplay<'a> {
        IntervalDisplay { iv: self, fmt }
    }

    /// Parse `[lo, hi]`, with bounds in either literal form.
    pub fn parse(s: &str, fmt: &FpFormat) -> Result<FpInterval, IntervalError> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| IntervalError::Syntax(format!("expected `[lo, hi]`, got `{s}`")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| IntervalError::Syntax(format!("missing `,` in `{s}`")))?;
        let lo = parse_literal(a.trim(), fmt)?;
        let hi = parse_literal(b.trim(), fmt)?;
        FpInterval::new(lo, hi)
    }
}

pub struct IntervalDisplay<'a> {
    iv: &'a FpInterval,
    fmt: &'a FpFormat,
}

impl fmt::Display for IntervalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            to_bit_literal(&self.iv.lo, self.fmt),
            to_bit_literal(&self.iv.hi, self.fmt)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minifloat::from_f64;

    fn iv(a: f64, b: f64) -> FpInterval {
        let t = FpFormat::tiny();
        FpInterval::new(from_f64(a, &t), from_f64(b, &t)).unwrap()
    }

    #[test]
    fn lattice_basics() {
        assert_eq!(iv(1.0, 4.0).intersect(&iv(2.0, 8.0)).unwrap(), iv(2.0, 4.0));
        assert_eq!(iv(-2.0, -1.0).hull(&iv(3.0, 5.0)), iv(-2.0, 5.0));
        assert_eq!(iv(1.0, 2.0).intersect(&iv(3.0, 4.0)), Err(IntervalError::Empty));
    }

    #[test]
    fn zero_singletons_are_distinct() {
        let t = FpFormat::tiny();
        let n = FpInterval::singleton(FpVal::neg_zero(&t));
        let p = FpInterval::singleton(FpVal::pos_zero(&t));
        assert!(n.intersect(&p).is_err());
        assert_eq!(n.hull(&p).count(&t), 2);
        assert!(n.has_zero() && p.has_zero());
    }

    #[test]
    fn count_one_binade() {
        let t = FpFormat::tiny();
        let a = FpInterval::new(t.one(), FpVal::finite(false, 0b111111, 0)).unwrap();
        assert_eq!(a.count(&t), 32);
        assert_eq!(FpInterval::full().count(&t), 450);
    }

    #[test]
    fn split_halves() {
        let t = FpFormat::tiny();
        let (l, r) = FpInterval::full().split(&t).unwrap();
        assert_eq!(l.count(&t), 225);
        assert_eq!(r.count(&t), 225);
        assert_eq!(l.hi(), FpVal::neg_zero(&t));
        assert_eq!(r.lo(), FpVal::pos_zero(&t));
        assert!(FpInterval::singleton(t.one()).split(&t).is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = FpFormat::tiny();
        let a = FpInterval::new(FpVal::neg_zero(&t), t.f_max()).unwrap();
        let s = a.display(&t).to_string();
        assert_eq!(s, "[-0, 1.11111e2^3]");
        assert_eq!(FpInterval::parse(&s, &t).unwrap(), a);
        assert_eq!(FpInterval::parse("[1.0, 2]", &t).unwrap(), iv(1.0, 2.0));
        assert!(FpInterval::parse("[2, 1]", &t).is_err());
    }
}
