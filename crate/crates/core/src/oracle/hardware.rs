use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::reference::reference_eval;
use crate::minifloat::{to_f32, try_from_f32, FpFormat, Op};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HardwareReport {
    pub op: Op,
    pub samples: u64,
    /// Disagreements of the minifloat or the reference result with the
    /// native one, as `x op y` bit patterns (first few only).
    pub mismatches: Vec<String>,
    pub mismatch_count: u64,
}

fn native(op: Op, x: f32, y: f32) -> f32 {
    match op {
        Op::Add => x + y,
        Op::Sub => x - y,
        Op::Mul => x * y,
        Op::Div => x / y,
    }
}

/// Operand pairs: raw bit patterns, nearby magnitudes (cancellation and
/// absorption), and small integers.
fn sample(rng: &mut ChaCha8Rng) -> (f32, f32) {
    loop {
        let x = f32::from_bits(rng.gen());
        let y = match rng.gen_range(0..4) {
            0 | 1 => f32::from_bits(rng.gen()),
            2 => f32::from_bits(x.to_bits() ^ rng.gen_range(0..1u32 << 12)),
            _ => f32::from_bits((x.to_bits() & 0x8000_0000) ^ rng.gen_range(0x3f00_0000..0x4200_0000)),
        };
        if !x.is_nan() && !y.is_nan() {
            return (x, y);
        }
    }
}

/// Compare `samples` binary32 operations against the host FPU.
pub fn hardware_check(op: Op, samples: u64, seed: u64) -> HardwareReport {
    let f = FpFormat::binary32();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ op as u64);
    let mut rep = HardwareReport {
        op,
        samples,
        mismatches: Vec::new(),
        mismatch_count: 0,
    };
    for _ in 0..samples {
        let (x, y) = sample(&mut rng);
        let want = native(op, x, y);
        let (a, b) = (try_from_f32(x, &f).unwrap(), try_from_f32(y, &f).unwrap());
        let agree = |r: Option<crate::minifloat::FpVal>| match r {
            None => want.is_nan(),
            Some(v) => to_f32(&v, &f).is_some_and(|g| g.to_bits() == want.to_bits()),
        };
        if !(agree(op.eval(a, b, &f)) && agree(reference_eval(op, a, b, &f))) {
            rep.mismatch_count += 1;
            if rep.mismatches.len() < 5 {
                rep.mismatches
                    .push(format!("{:#010x} {op} {:#010x}", x.to_bits(), y.to_bits()));
            }
        }
    }
    rep
}
