//! Text forms: exact binary literals such as `1.00110e2^5`, `-0`, `+inf`,
//! and decimal constants rounded to nearest.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::format::FpFormat;
use super::round::{round_bits, round_rational};
use super::value::FpVal;
use super::FloatError;

/// Largest decimal exponent magnitude evaluated exactly; beyond it a
/// nonzero decimal saturates to an infinity or a signed zero.
const DECIMAL_EXP_LIMIT: i64 = 40_000;

/// Print a value as an exact binary literal.
///
/// Normal values show the hidden bit and all `p - 1` fraction bits;
/// subnormals print with a leading `0.` at exponent `e_min`.
pub fn to_bit_literal(v: &FpVal, fmt: &FpFormat) -> String {
    match *v {
        FpVal::NegInf => "-inf".to_string(),
        FpVal::PosInf => "+inf".to_string(),
        FpVal::Finite {
            negative,
            significand: 0,
            ..
        } => if negative { "-0" } else { "+0" }.to_string(),
        FpVal::Finite {
            negative,
            significand,
            exponent,
        } => {
            let p = fmt.precision() as usize;
            let bits = format!("{significand:0p$b}");
            let sign = if negative { "-" } else { "" };
            format!("{sign}{}.{}e2^{exponent}", &bits[..1], &bits[1..])
        }
    }
}

fn split_sign(s: &str) -> (bool, &str) {
    if let Some(r) = s.strip_prefix('-') {
        (true, r)
    } else if let Some(r) = s.strip_prefix('+') {
        (false, r)
    } else {
        (false, s)
    }
}

fn parse_special(body: &str, negative: bool, fmt: &FpFormat) -> Option<FpVal> {
    match body {
        "inf" | "infinity" | "Inf" | "INF" => Some(FpVal::infinity(negative)),
        "0" => Some(FpVal::zero(negative, fmt)),
        _ => None,
    }
}

/// Parse an exact binary literal; the value must be representable in
/// `fmt` without rounding.
pub fn parse_bit_literal(s: &str, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    let err = |why: &str| FloatError::Parse(format!("bad binary literal `{s}`: {why}"));
    let (negative, body) = split_sign(s.trim());
    if let Some(v) = parse_special(body, negative, fmt) {
        return Ok(v);
    }
    let (digits, exp) = body
        .split_once("e2^")
        .or_else(|| body.split_once("x2^"))
        .or_else(|| body.split_once("\u{d7}2^"))
        .ok_or_else(|| err("missing `e2^` exponent"))?;
    let exp: i64 = exp.parse().map_err(|_| err("bad exponent"))?;
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() || !int_part.chars().chain(frac_part.chars()).all(|c| c == '0' || c == '1') {
        return Err(err("significand must be binary digits"));
    }
    let all = format!("{int_part}{frac_part}");
    let sig = BigUint::parse_bytes(all.as_bytes(), 2).ok_or_else(|| err("empty significand"))?;
    let scale = exp - frac_part.len() as i64;
    if sig.is_zero() {
        return Ok(FpVal::zero(negative, fmt));
    }
    let r = round_bits(negative, &sig, scale, false, fmt);
    if r.inexact || r.value.is_infinite() {
        return Err(FloatError::Parse(format!("`{s}` is not representable in {fmt}")));
    }
    Ok(r.value)
}

/// Parse a decimal constant and round it to nearest, ties to even.
pub fn parse_decimal(s: &str, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    let err = || FloatError::Parse(format!("bad decimal literal `{s}`"));
    let (negative, body) = split_sign(s.trim());
    if let Some(v) = parse_special(body, negative, fmt) {
        return Ok(v);
    }
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let m = BigUint::parse_bytes(digits.as_bytes(), 10).unwrap_or_default();
    if m.is_zero() {
        return Ok(FpVal::zero(negative, fmt));
    }
    let e10 = exp - frac_part.len() as i64;
    if e10 > DECIMAL_EXP_LIMIT {
        return Ok(FpVal::infinity(negative));
    }
    if e10 < -DECIMAL_EXP_LIMIT {
        return Ok(FpVal::zero(negative, fmt));
    }
    let ten = BigUint::from(10u8);
    let (num, den) = if e10 >= 0 {
        (m * ten.pow(e10 as u32), BigUint::one())
    } else {
        (m, ten.pow((-e10) as u32))
    };
    Ok(round_rational(negative, &num, &den, 0, fmt).value)
}

/// Parse either literal form: text containing `2^` is binary, the rest is
/// decimal.
pub fn parse_literal(s: &str, fmt: &FpFormat) -> Result<FpVal, FloatError> {
    if s.contains("2^") {
        parse_bit_literal(s, fmt)
    } else {
        parse_decimal(s, fmt)
    }
}

/// Exact decimal expansion: digits `d` and exponent `k` with value
/// `d * 10^k`.
fn exact_decimal(m: u128, exp2: i64) -> (String, i64) {
    let m = BigUint::from(m);
    if exp2 >= 0 {
        ((m << exp2 as usize).to_string(), 0)
    } else {
        let five = BigUint::from(5u8);
        ((m * five.pow((-exp2) as u32)).to_string(), exp2)
    }
}

/// Round a digit string to `n` leading digits, half to even; returns the
/// digits and the count of positions dropped (one more if a carry
/// lengthened the string).
fn round_digits(d: &str, n: usize) -> (String, i64) {
    if d.len() <= n {
        return (d.to_string(), 0);
    }
    let head = &d[..n];
    let rest = &d[n..];
    let first = rest.as_bytes()[0];
    let tail_nonzero = rest[1..].bytes().any(|b| b != b'0');
    let last_odd = (head.as_bytes()[n - 1] - b'0') % 2 == 1;
    let up = first > b'5' || (first == b'5' && (tail_nonzero || last_odd));
    let mut v = BigUint::parse_bytes(head.as_bytes(), 10).expect("digits");
    if up {
        v += 1u8;
    }
    let s = v.to_string();
    let dropped = rest.len() as i64;
    if s.len() > n {
        (s[..n].to_string(), dropped + 1)
    } else {
        (s, dropped)
    }
}

fn render(negative: bool, digits: &str, k: i64) -> String {
    // value = digits * 10^k; `sci` is the decimal exponent of the first digit.
    let sci = k + digits.len() as i64 - 1;
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };
    if (-5..21).contains(&sci) {
        if sci >= 0 {
            let int_len = (sci + 1) as usize;
            if digits.len() <= int_len {
                format!("{sign}{digits}{}.0", "0".repeat(int_len - digits.len()))
            } else {
                format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("{sign}0.{}{digits}", "0".repeat((-sci - 1) as usize))
        }
    } else if digits.len() == 1 {
        format!("{sign}{digits}e{sci}")
    } else {
        format!("{sign}{}.{}e{sci}", &digits[..1], &digits[1..])
    }
}

/// Shortest decimal string that parses back to exactly `v` in `fmt`.
pub fn to_decimal(v: &FpVal, fmt: &FpFormat) -> String {
    let (negative, m, e) = match *v {
        FpVal::NegInf => return "-inf".to_string(),
        FpVal::PosInf => return "inf".to_string(),
        FpVal::Finite {
            negative,
            significand: 0,
            ..
        } => return if negative { "-0.0" } else { "0.0" }.to_string(),
        FpVal::Finite {
            negative,
            significand,
            exponent,
        } => (negative, significand, exponent),
    };
    let exp2 = e as i64 + 1 - fmt.precision() as i64;
    let (digits, k) = exact_decimal(m, exp2);
    for n in 1..digits.len() {
        let (d, dropped) = round_digits(&digits, n);
        let candidate = render(negative, &d, k + dropped);
        if parse_decimal(&candidate, fmt).ok().as_ref() == Some(v) {
            return candidate;
        }
    }
    render(negative, &digits, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_literal_forms() {
        let t = FpFormat::tiny();
        assert_eq!(to_bit_literal(&t.one(), &t), "1.00000e2^0");
        assert_eq!(to_bit_literal(&t.f_min(), &t), "0.00001e2^-2");
        assert_eq!(to_bit_literal(&FpVal::neg_zero(&t), &t), "-0");
        assert_eq!(to_bit_literal(&FpVal::PosInf, &t), "+inf");
        assert_eq!(to_bit_literal(&FpVal::finite(true, 0b100110, 3), &t), "-1.00110e2^3");
    }

    #[test]
    fn bit_literal_parse_accepts_unnormalized_text() {
        let t = FpFormat::tiny();
        assert_eq!(parse_bit_literal("1e2^-7", &t).unwrap(), t.f_min());
        assert_eq!(parse_bit_literal("0.1e2^1", &t).unwrap(), t.one());
        assert_eq!(parse_bit_literal("10e2^-1", &t).unwrap(), t.one());
        assert!(parse_bit_literal("1.000001e2^0", &t).is_err());
        assert!(parse_bit_literal("1e2^4", &t).is_err());
        assert!(parse_bit_literal("1.2e2^0", &t).is_err());
    }

    #[test]
    fn decimal_rounding() {
        let b32 = FpFormat::binary32();
        let c = parse_decimal("1.0e12", &b32).unwrap();
        assert_eq!(super::super::to_f64(&c, &b32), Some(999999995904.0));
        assert_eq!(parse_decimal("-0", &b32).unwrap(), FpVal::neg_zero(&b32));
        assert_eq!(parse_decimal("1e99999999", &b32).unwrap(), FpVal::PosInf);
        assert!(parse_decimal("1.0.0", &b32).is_err());
        assert!(parse_decimal("", &b32).is_err());
        assert!(parse_decimal(".", &b32).is_err());
    }

    #[test]
    fn shortest_decimal() {
        let b64 = FpFormat::binary64();
        let cases = [
            (0.1, "0.1"),
            (1.0, "1.0"),
            (32767.998046875, "32767.998046875"),
            (1e300, "1e300"),
            (5e-324, "5e-324"),
            (-2.5, "-2.5"),
            (123456789.0, "123456789.0"),
            (1e21, "1e21"),
            (1e-7, "1e-7"),
            (0.00012, "0.00012"),
        ];
        for (x, want) in cases {
            let v = super::super::from_f64(x, &b64);
            let s = to_decimal(&v, &b64);
            assert_eq!(s, want);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn decimal_for_tiny() {
        let t = FpFormat::tiny();
        // 16 already rounds past the overflow threshold.
        assert_eq!(to_decimal(&t.f_max(), &t), "15.8");
        assert_eq!(parse_decimal("16.0", &t).unwrap(), FpVal::PosInf);
        assert_eq!(to_decimal(&t.f_min(), &t), "0.008");
    }
}
