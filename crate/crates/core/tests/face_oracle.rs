use std::time::Instant;

use xtt::harness::oracle::compare_grid;

#[test]
fn solver_agrees_with_oracle_on_the_whole_grid() {
    let started = Instant::now();
    let report = compare_grid(3, 3);
    let elapsed = started.elapsed();
    assert!(
        report.disagreements.is_empty(),
        "{} disagreements, first: {:?}",
        report.disagreements.len(),
        report.disagreements[0]
    );
    eprintln!("{} sequents in {elapsed:?}", report.sequents);
}
