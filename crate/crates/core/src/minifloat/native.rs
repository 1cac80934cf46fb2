//! Bridges to the host `f32`/`f64` types.

use super::format::FpFormat;
use super::round::round_exact;
use super::value::FpVal;

fn decode(bits: u64, frac_bits: u32, exp_bits: u32) -> Option<(bool, u128, i32)> {
    let negative = bits >> (frac_bits + exp_bits) & 1 == 1;
    let biased = (bits >> frac_bits) & ((1 << exp_bits) - 1);
    let frac = (bits & ((1u64 << frac_bits) - 1)) as u128;
    let bias = (1i32 << (exp_bits - 1)) - 1;
    if biased == (1 << exp_bits) - 1 {
        return if frac == 0 {
            Some((negative, u128::MAX, 0))
        } else {
            None
        };
    }
    if biased == 0 {
        Some((negative, frac, 1 - bias))
    } else {
        Some((negative, frac | (1u128 << frac_bits), biased as i32 - bias))
    }
}

fn encode(v: &FpVal, frac_bits: u32, exp_bits: u32) -> u64 {
    let bias = (1i64 << (exp_bits - 1)) - 1;
    let sign = (v.is_sign_negative() as u64) << (frac_bits + exp_bits);
    match *v {
        FpVal::NegInf | FpVal::PosInf => sign | (((1u64 << exp_bits) - 1) << frac_bits),
        FpVal::Finite {
            significand, exponent, ..
        } => {
            let hidden = 1u128 << frac_bits;
            let frac = (significand & (hidden - 1)) as u64;
            let biased = if significand < hidden {
                0
            } else {
                (exponent as i64 + bias) as u64
            };
            sign | (biased << frac_bits) | frac
        }
    }
}

fn from_parts(parts: Option<(bool, u128, i32)>, native: &FpFormat, fmt: &FpFormat) -> Option<FpVal> {
    let (negative, m, e) = parts?;
    let v = if m == u128::MAX {
        FpVal::infinity(negative)
    } else if m == 0 {
        FpVal::zero(negative, native)
    } else {
        FpVal::finite(negative, m, e)
    };
    Some(v.convert(native, fmt))
}

/// Round an `f64` into `fmt`. NaN has no image and panics; use
/// [`try_from_f64`] for untrusted input.
pub fn from_f64(x: f64, fmt: &FpFormat) -> FpVal {
    try_from_f64(x, fmt).expect("NaN has no floating-point datum")
}

pub fn try_from_f64(x: f64, fmt: &FpFormat) -> Option<FpVal> {
    let native = FpFormat::binary64();
    from_parts(decode(x.to_bits(), 52, 11), &native, fmt)
}

pub fn try_from_f32(x: f32, fmt: &FpFormat) -> Option<FpVal> {
    let native = FpFormat::binary32();
    from_parts(decode(x.to_bits() as u64, 23, 8), &native, fmt)
}

fn narrow(v: &FpVal, fmt: &FpFormat, native: &FpFormat) -> FpVal {
    if fmt == native {
        return *v;
    }
    match v.exact(fmt) {
        Some(x) if !v.is_zero() => round_exact(&x, native),
        _ => v.convert(fmt, native),
    }
}

/// The value as an `f64`, rounded to nearest when `fmt` is wider.
pub fn to_f64(v: &FpVal, fmt: &FpFormat) -> Option<f64> {
    let r = narrow(v, fmt, &FpFormat::binary64());
    Some(f64::from_bits(encode(&r, 52, 11)))
}

pub fn to_f32(v: &FpVal, fmt: &FpFormat) -> Option<f32> {
    let r = narrow(v, fmt, &FpFormat::binary32());
    Some(f32::from_bits(encode(&r, 23, 8) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        let f = FpFormat::binary64();
        for x in [
            0.0,
            -0.0,
            1.5,
            -1e-310,
            f64::MAX,
            f64::INFINITY,
            f64::NEG_INFINITY,
            5e-324,
        ] {
            let v = from_f64(x, &f);
            assert_eq!(to_f64(&v, &f).unwrap().to_bits(), x.to_bits());
        }
        assert!(try_from_f64(f64::NAN, &f).is_none());
    }

    #[test]
    fn f32_round_trip() {
        let f = FpFormat::binary32();
        for x in [0.0f32, -0.0, 1.1, f32::MAX, f32::MIN_POSITIVE, 1e-45] {
            let v = try_from_f32(x, &f).unwrap();
            assert_eq!(to_f32(&v, &f).unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn narrowing_rounds() {
        let t = FpFormat::tiny();
        assert_eq!(from_f64(1.0 / 3.0, &t), FpVal::finite(false, 0b101011, -2));
        assert_eq!(from_f64(1e9, &t), FpVal::PosInf);
        assert_eq!(to_f64(&t.f_max(), &t), Some(15.75));
    }
}
