use fpcp::frontend::{parse_problem, print_problem};
use fpcp::maxulp::MuRule;
use fpcp::minifloat::FpFormat;
use fpcp::oracle::{random_system, run_corpus, run_property_suite_with, Oracle, SuiteOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fast(rule: MuRule) -> SuiteOptions {
    SuiteOptions {
        mu_rule: rule,
        systems: 0,
        ..SuiteOptions::default()
    }
}

#[test]
fn suite_catches_the_uncorrected_mu_rule() {
    let rep = run_property_suite_with(&FpFormat::tiny(), &fast(MuRule::MarreMichel)).unwrap();
    let mu = rep.get("mu-add-maximal").unwrap();
    assert!(mu.failures > 0);
    assert!(!mu.counterexamples.is_empty());
    assert!(rep.get("maxulp-interval-sound").unwrap().failures > 0);
    // The pointwise bounds do not depend on the rule.
    assert!(rep.get("ulpmax-add-exact").unwrap().passed());
}

#[test]
fn suite_passes_on_other_small_formats() {
    for name in ["custom(4,3,-3)", "custom(5,2,-1)", "custom(3,4,-4)"] {
        let f: FpFormat = name.parse().unwrap();
        let rep = run_property_suite_with(&f, &fast(MuRule::Corrected)).unwrap();
        let bad: Vec<_> = rep.properties.iter().filter(|p| !p.passed()).collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn corpus_is_sound_on_another_format_and_seed() {
    let o = Oracle::new(&"custom(4,3,-3)".parse().unwrap()).unwrap();
    let rep = run_corpus(&o, 200, 1234);
    assert!(rep.passed(), "{:?} {:?}", rep.discrepancies, rep.ablation_violations);
    assert!(rep.satisfiable > 0);
}

#[test]
fn random_systems_survive_print_and_parse() {
    let o = Oracle::new(&FpFormat::tiny()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let net = random_system(&mut rng, o.universe());
        let text = print_problem(&net);
        let back = parse_problem(&text, None).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back, net, "{text}");
    }
}
