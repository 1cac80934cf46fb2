use fpcp::classic;
use fpcp::interval::FpInterval;
use fpcp::maxulp::maxulp_bounds;
use fpcp::minifloat::{
    parse_bit_literal, parse_decimal, to_bit_literal, to_decimal, to_f64, try_from_f32, try_from_f64, FpFormat, FpVal,
    Op,
};
use proptest::prelude::*;

fn b32() -> FpFormat {
    FpFormat::binary32()
}

fn val32() -> impl Strategy<Value = FpVal> {
    any::<u32>().prop_filter_map("nan", |b| try_from_f32(f32::from_bits(b), &b32()))
}

/// Values clustered near a few magnitudes so that random intervals overlap.
fn near32() -> impl Strategy<Value = FpVal> {
    (any::<bool>(), -30i32..30, 0u32..(1 << 23)).prop_map(|(neg, e, frac)| {
        let m = (1u128 << 23) | frac as u128;
        FpVal::finite(neg, m, e)
    })
}

fn ival32() -> impl Strategy<Value = FpInterval> {
    (near32(), near32()).prop_map(|(a, b)| FpInterval::new(a.min(b), a.max(b)).unwrap())
}

fn op() -> impl Strategy<Value = Op> {
    prop::sample::select(Op::ALL.to_vec())
}

fn project(op: Op, z: &FpInterval, x: &FpInterval, y: &FpInterval, f: &FpFormat) -> [Option<FpInterval>; 3] {
    match op {
        Op::Add => [
            classic::add_direct(x, y, f),
            classic::add_operand(z, x, y, f),
            classic::add_operand(z, y, x, f),
        ],
        Op::Sub => [
            classic::sub_direct(x, y, f),
            classic::sub_first(z, x, y, f),
            classic::sub_second(z, x, y, f),
        ],
        Op::Mul => [
            classic::mul_direct(x, y, f),
            classic::mul_operand(z, x, y, f),
            classic::mul_operand(z, y, x, f),
        ],
        Op::Div => [
            classic::div_direct(x, y, f),
            classic::div_first(z, x, y, f),
            classic::div_second(z, x, y, f),
        ],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn binary64_matches_native(a in any::<f64>(), b in any::<f64>(), op in op()) {
        let f = FpFormat::binary64();
        let (Some(x), Some(y)) = (try_from_f64(a, &f), try_from_f64(b, &f)) else { return Ok(()) };
        let native = match op {
            Op::Add => a + b,
            Op::Sub => a - b,
            Op::Mul => a * b,
            Op::Div => a / b,
        };
        match op.eval(x, y, &f) {
            None => prop_assert!(native.is_nan()),
            Some(r) => prop_assert_eq!(to_f64(&r, &f).unwrap().to_bits(), native.to_bits()),
        }
    }

    #[test]
    fn literals_round_trip(v in val32(), w in any::<u64>()) {
        let f = b32();
        prop_assert_eq!(parse_bit_literal(&to_bit_literal(&v, &f), &f).unwrap(), v);
        prop_assert_eq!(parse_decimal(&to_decimal(&v, &f), &f).unwrap(), v);
        let g = FpFormat::binary64();
        if let Some(d) = try_from_f64(f64::from_bits(w), &g) {
            prop_assert_eq!(parse_bit_literal(&to_bit_literal(&d, &g), &g).unwrap(), d);
            prop_assert_eq!(parse_decimal(&to_decimal(&d, &g), &g).unwrap(), d);
        }
    }

    #[test]
    fn decimal_parsing_matches_native(a in any::<f32>()) {
        prop_assume!(!a.is_nan());
        let f = b32();
        let s = format!("{a:e}");
        let v = parse_decimal(&s, &f).unwrap();
        prop_assert_eq!(fpcp::minifloat::to_f32(&v, &f).unwrap().to_bits(), a.to_bits());
    }

    #[test]
    fn classic_projections_keep_solutions(
        op in op(), xs in ival32(), ys in ival32(), zs in ival32(), tx in 0.0f64..1.0, ty in 0.0f64..1.0,
    ) {
        let f = b32();
        let pick = |d: &FpInterval, t: f64| {
            let lo = d.lo().order_key(&f);
            let hi = d.hi().order_key(&f);
            FpVal::from_order_key(lo + ((hi - lo) as f64 * t) as i128, &f).unwrap()
        };
        let (x, y) = (pick(&xs, tx), pick(&ys, ty));
        let Some(z) = op.eval(x, y, &f) else { return Ok(()) };
        // Lift Z to contain the result so the triple is a solution.
        let zs = zs.hull(&FpInterval::singleton(z));
        let [d, px, py] = project(op, &zs, &xs, &ys, &f);
        prop_assert!(d.is_some_and(|d| d.contains(&z)), "direct {:?}", d);
        prop_assert!(px.is_some_and(|d| d.contains(&x)), "first {:?}", px);
        prop_assert!(py.is_some_and(|d| d.contains(&y)), "second {:?}", py);

        let b = maxulp_bounds(op, &zs, &f);
        if let Some(bx) = b.x { prop_assert!(bx.contains(&x), "max-ulp x {:?}", bx); }
        if let Some(by) = b.y { prop_assert!(by.contains(&y), "max-ulp y {:?}", by); }
    }

    #[test]
    fn maxulp_bounds_are_symmetric_for_mul_div(z in near32(), w in near32(), op in prop::sample::select(vec![Op::Mul, Op::Div])) {
        let f = b32();
        let w = if w.is_sign_negative() == z.is_sign_negative() { w } else { w.neg() };
        let zs = FpInterval::new(z.min(w), z.max(w)).unwrap();
        let b = maxulp_bounds(op, &zs, &f);
        for d in [b.x, b.y].into_iter().flatten() {
            prop_assert_eq!(d.negate(), d);
        }
    }
}
