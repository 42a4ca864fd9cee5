use xtt::elab::{Checker, DeclReport, Options, Status};
use xtt::harness::corpus::{corpus, round_trips};

fn source(name: &str) -> &'static str {
    corpus().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn check_file(name: &str) -> (Checker, Vec<DeclReport>) {
    let src = source(name);
    let mut checker = Checker::new(Options::default());
    let reports = checker.check_source(src).unwrap_or_else(|d| panic!("{}", d.render(name, src)));
    for r in &reports {
        if let Some(e) = &r.error {
            panic!("{}", e.render(name, src));
        }
        assert_eq!(r.status, Status::Ok);
    }
    (checker, reports)
}

#[test]
fn prelude() {
    check_file("prelude.xtt");
}

#[test]
fn kan_laws() {
    check_file("kan-laws.xtt");
}

#[test]
fn uip() {
    check_file("uip.xtt");
}

#[test]
fn typecase() {
    check_file("typecase.xtt");
}

#[test]
fn negatives_are_rejected_with_their_codes() {
    let (_, reports) = check_file("negatives.xtt");
    let codes: Vec<&str> = reports
        .iter()
        .map(|r| r.rejected_with.as_ref().unwrap().code.as_str())
        .collect();
    assert_eq!(
        codes,
        ["E033", "E031", "E031", "E032", "E030", "E026", "E040", "E040", "E020"]
    );
}

#[test]
fn every_declaration_survives_both_round_trips() {
    let mut total = 0;
    for (name, _) in corpus() {
        let (checker, reports) = check_file(name);
        for rt in round_trips(&checker, &reports) {
            assert!(rt.normal_form, "{name}: {} changes when its normal form is re-evaluated", rt.name);
            assert!(rt.emitted, "{name}: {} does not survive emit-core", rt.name);
            total += 1;
        }
    }
    assert!(total >= 30, "only {total} declarations produced core terms");
}

#[test]
fn double_check_accepts_the_corpus() {
    for (name, src) in corpus() {
        let mut checker = Checker::new(Options {
            double_check: true,
            ..Options::default()
        });
        for r in checker.check_source(src).unwrap() {
            assert!(r.error.is_none(), "{}", r.error.unwrap().render(name, src));
        }
    }
}
