//! Parametric binary floating-point formats.

use std::fmt;
use std::str::FromStr;

use super::value::FpVal;
use super::FloatError;

/// Largest supported precision; significands are stored in a `u128`.
pub const MAX_PRECISION: u32 = 113;

/// A binary floating-point format `F(p, e_max, e_min)`.
///
/// With `unbounded_exponent` set the format models the idealized set with
/// no exponent limits: there are no subnormals and no overflow, and
/// `e_max`/`e_min` are ignored for range checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpFormat {
    precision: u32,
    e_max: i32,
    e_min: i32,
    unbounded_exponent: bool,
}

impl FpFormat {
    pub fn new(precision: u32, e_max: i32, e_min: i32) -> Result<Self, FloatError> {
        if !(2..=MAX_PRECISION).contains(&precision) {
            return Err(FloatError::InvalidFormat(format!(
                "precision {precision} outside 2..={MAX_PRECISION}"
            )));
        }
        if e_min > 0 || e_max < 0 {
            return Err(FloatError::InvalidFormat(format!(
                "exponent bounds must satisfy e_min <= 0 <= e_max (got e_min={e_min}, e_max={e_max})"
            )));
        }
        // Keep every derived exponent comfortably inside i32.
        if e_max > (1 << 24) || e_min < -(1 << 24) {
            return Err(FloatError::InvalidFormat("exponent range too large".into()));
        }
        // Order keys are i128: (binades + 1) * 2^(p-1) must stay below 2^125.
        let binades = (e_max as i64 - e_min as i64 + 2) as u128;
        let binade_bits = 128 - binades.leading_zeros();
        if binade_bits + precision - 1 > 125 {
            return Err(FloatError::InvalidFormat(
                "precision and exponent range too large together".into(),
            ));
        }
        Ok(FpFormat {
            precision,
            e_max,
            e_min,
            unbounded_exponent: false,
        })
    }

    /// IEEE 754 single precision.
    pub const fn binary32() -> Self {
        FpFormat {
            precision: 24,
            e_max: 127,
            e_min: -126,
            unbounded_exponent: false,
        }
    }

    /// IEEE 754 double precision.
    pub const fn binary64() -> Self {
        FpFormat {
            precision: 53,
            e_max: 1023,
            e_min: -1022,
            unbounded_exponent: false,
        }
    }

    /// The exhaustive-testing format: p = 6, e_max = 3, e_min = -2.
    pub const fn tiny() -> Self {
        FpFormat {
            precision: 6,
            e_max: 3,
            e_min: -2,
            unbounded_exponent: false,
        }
    }

    /// Same precision with unbounded exponents.
    pub fn unbounded(self) -> Self {
        FpFormat {
            unbounded_exponent: true,
            ..self
        }
    }

    /// Same precision and exponent bounds, with the exponent range enforced.
    pub fn bounded(self) -> Self {
        FpFormat {
            unbounded_exponent: false,
            ..self
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn e_max(&self) -> i32 {
        self.e_max
    }

    pub fn e_min(&self) -> i32 {
        self.e_min
    }

    pub fn is_unbounded(&self) -> bool {
        self.unbounded_exponent
    }

    /// `2^(p-1)`, the hidden bit of a normal significand.
    pub(crate) fn hidden_bit(&self) -> u128 {
        1u128 << (self.precision - 1)
    }

    /// `2^p - 1`, the all-ones significand.
    pub(crate) fn max_significand(&self) -> u128 {
        (1u128 << self.precision) - 1
    }

    /// The integer q = 1 - p + e_min + e_max.
    pub fn q(&self) -> i32 {
        1 - self.precision as i32 + self.e_min + self.e_max
    }

    /// Smallest positive subnormal, `2^(e_min + 1 - p)`.
    pub fn f_min(&self) -> FpVal {
        FpVal::finite(false, 1, self.e_min)
    }

    /// Smallest positive normal, `2^e_min`.
    pub fn f_nor_min(&self) -> FpVal {
        FpVal::finite(false, self.hidden_bit(), self.e_min)
    }

    /// Largest finite value, `2^e_max (2 - 2^(1-p))`.
    pub fn f_max(&self) -> FpVal {
        FpVal::finite(false, self.max_significand(), self.e_max)
    }

    /// `+1.0`.
    pub fn one(&self) -> FpVal {
        FpVal::finite(false, self.hidden_bit(), 0)
    }

    /// `2^k` as a format value, or `None` if it is not representable.
    pub fn pow2(&self, k: i32) -> Option<FpVal> {
        if self.unbounded_exponent || k >= self.e_min {
            if !self.unbounded_exponent && k > self.e_max {
                return None;
            }
            return Some(FpVal::finite(false, self.hidden_bit(), k));
        }
        let shift = self.e_min - k;
        if shift >= self.precision as i32 {
            return None;
        }
        Some(FpVal::finite(false, self.hidden_bit() >> shift, self.e_min))
    }

    /// Number of values (both zeros, both infinities, no NaN) in a bounded
    /// format, or `None` when the count does not fit or the format is
    /// unbounded.
    pub fn value_count(&self) -> Option<u128> {
        if self.unbounded_exponent {
            return None;
        }
        let per_binade = self.hidden_bit();
        let binades = (self.e_max - self.e_min + 1) as u128;
        // Positive finite values, excluding zero.
        let positive = binades.checked_mul(per_binade)?.checked_add(per_binade - 1)?;
        positive.checked_mul(2)?.checked_add(4)
    }

    /// Name used by the textual front end.
    pub fn name(&self) -> String {
        let base = if *self == Self::binary32() {
            "binary32".to_string()
        } else if *self == Self::binary64() {
            "binary64".to_string()
        } else if *self == Self::tiny() {
            "tiny".to_string()
        } else if self.bounded() == Self::binary32() {
            "binary32".to_string()
        } else if self.bounded() == Self::binary64() {
            "binary64".to_string()
        } else if self.bounded() == Self::tiny() {
            "tiny".to_string()
        } else {
            format!("custom({},{},{})", self.precision, self.e_max, self.e_min)
        };
        if self.unbounded_exponent {
            format!("{base}+unbounded")
        } else {
            base
        }
    }
}

impl fmt::Display for FpFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FpFormat {
    type Err = FloatError;

    /// Accepts `binary32`, `binary64`, `tiny` and `custom(p,emax,emin)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "binary32" | "single" => return Ok(Self::binary32()),
            "binary64" | "double" => return Ok(Self::binary64()),
            "tiny" => return Ok(Self::tiny()),
            _ => {}
        }
        let inner = s
            .strip_prefix("custom(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| FloatError::InvalidFormat(format!("unknown format `{s}`")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(FloatError::InvalidFormat(format!(
                "custom format needs (p,emax,emin), got `{s}`"
            )));
        }
        let bad = |_| FloatError::InvalidFormat(format!("bad number in `{s}`"));
        let p: u32 = parts[0].parse().map_err(bad)?;
        let e_max: i32 = parts[1].parse().map_err(bad)?;
        let e_min: i32 = parts[2].parse().map_err(bad)?;
        FpFormat::new(p, e_max, e_min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!("binary32".parse::<FpFormat>().unwrap(), FpFormat::binary32());
        assert_eq!("binary64".parse::<FpFormat>().unwrap(), FpFormat::binary64());
        assert_eq!("tiny".parse::<FpFormat>().unwrap(), FpFormat::tiny());
        assert_eq!("custom(6, 3, -2)".parse::<FpFormat>().unwrap(), FpFormat::tiny());
        assert!("custom(1,3,-2)".parse::<FpFormat>().is_err());
        assert!("custom(6,3,1)".parse::<FpFormat>().is_err());
        assert!("quad".parse::<FpFormat>().is_err());
    }

    #[test]
    fn q_matches_ieee_shortcut() {
        // e_min = 1 - e_max gives q = 2 - p.
        assert_eq!(FpFormat::binary32().q(), 2 - 24);
        assert_eq!(FpFormat::binary64().q(), 2 - 53);
        assert_eq!(FpFormat::tiny().q(), 2 - 6);
        let odd = FpFormat::new(8, 5, -7).unwrap();
        assert_eq!(odd.q(), 1 - 8 - 7 + 5);
    }

    #[test]
    fn tiny_value_count() {
        assert_eq!(FpFormat::tiny().value_count(), Some(450));
    }

    #[test]
    fn pow2_covers_subnormals() {
        let t = FpFormat::tiny();
        assert_eq!(t.pow2(-7), Some(t.f_min()));
        assert_eq!(t.pow2(-8), None);
        assert_eq!(t.pow2(3).unwrap(), FpVal::finite(false, 32, 3));
        assert_eq!(t.pow2(4), None);
        assert!(t.unbounded().pow2(40).is_some());
    }
}
