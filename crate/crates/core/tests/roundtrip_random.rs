use graph_realize::netcompile::{random_problem, GeneratorConfig};
use graph_realize::realize::RealizeOptions;
use graph_realize::roundtrip::{roundtrip, RoundTripOutcome};
use graph_realize::Rational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn seeded_problems_round_trip() {
    let cfg = GeneratorConfig::default();
    let mut failures = Vec::new();
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem::<f64, _>(&mut rng, &cfg).unwrap();
        let out = roundtrip(&p, &RealizeOptions::default()).unwrap();
        if let RoundTripOutcome::Failed { stage, reason } = out {
            failures.push(format!("seed {seed}: {stage}: {reason:?}"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn seeded_exact_problems_round_trip() {
    let cfg = GeneratorConfig::default();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem::<Rational, _>(&mut rng, &cfg).unwrap();
        let out = roundtrip(&p, &RealizeOptions::default()).unwrap();
        assert!(out.passed(), "seed {seed}: {out:?}");
    }
}
