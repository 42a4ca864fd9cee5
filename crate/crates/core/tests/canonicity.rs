use std::time::Instant;

use xtt::elab::Options;
use xtt::harness::fuzz::{fuzz, run_one, Case, Verdict};
use xtt::harness::generate::generate_closed_bool;

fn report(cases: &[Case]) -> usize {
    let failures: Vec<_> = cases.iter().filter(|c| !c.passed()).collect();
    for c in failures.iter().take(3) {
        let w = c.shrunk.as_ref().unwrap();
        eprintln!("size {} seed {}: {:?}\n  {}", w.size, w.seed, c.verdict, w.source);
    }
    failures.len()
}

#[test]
fn generated_booleans_normalize_to_their_literal() {
    let started = Instant::now();
    let cases = fuzz(1000, 42, &Options::default());
    eprintln!("1000 cases in {:?}", started.elapsed());
    assert_eq!(report(&cases), 0);
}

#[test]
fn large_terms_normalize_to_their_literal() {
    let options = Options::default();
    let mut failures = 0;
    for seed in 0..150u64 {
        let term = generate_closed_bool(seed, 24 + (seed as usize % 16));
        let (verdict, _) = run_one(&term, &options);
        if !matches!(verdict, Verdict::Canonical(_)) {
            failures += 1;
            eprintln!("seed {seed}: {verdict:?}\n  {}", term.source);
        }
    }
    assert_eq!(failures, 0);
}

#[test]
fn lines_that_vary_are_generated_often() {
    for chunk in 0..10u64 {
        let varying = (0..10u64)
            .filter(|k| generate_closed_bool(chunk * 10 + k, 8 + (*k as usize % 5)).has_varying_coe())
            .count();
        assert!(varying >= 1, "chunk {chunk} has no coercion along a varying line");
    }
}

#[test]
fn generation_is_deterministic() {
    for seed in 0..20 {
        assert_eq!(generate_closed_bool(seed, 10).source, generate_closed_bool(seed, 10).source);
    }
}
