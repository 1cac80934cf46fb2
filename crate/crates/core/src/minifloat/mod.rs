//! Software binary floating point over arbitrary `(p, e_max, e_min)`
//! formats, rounding to nearest with ties to even.

mod arith;
mod exact;
mod format;
mod literal;
mod native;
mod round;
mod value;

pub use arith::{add, div, err_down, err_up, mid, mul, overflow_threshold, round_hi, round_lo, sub, Op};
pub use exact::ExactScaled;
pub use format::{FpFormat, MAX_PRECISION};
pub use literal::{parse_bit_literal, parse_decimal, parse_literal, to_bit_literal, to_decimal};
pub use native::{from_f64, to_f32, to_f64, try_from_f32, try_from_f64};
pub use round::{round_bits, round_exact, round_rational, Rounded};
pub use value::FpVal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FloatError {
    #[error("invalid format: {0}")]
    InvalidFormat(String),
    #[error("value not in canonical form: {0}")]
    NotCanonical(String),
    #[error("+inf has no successor")]
    NoSuccessor,
    #[error("{0} is undefined with unbounded exponents")]
    Unbounded(&'static str),
    #[error("{0} is undefined for infinite operands")]
    InfiniteOperand(&'static str),
    #[error("argument outside the domain of {0}")]
    OutOfDomain(&'static str),
    #[error("{0}")]
    Parse(String),
}
