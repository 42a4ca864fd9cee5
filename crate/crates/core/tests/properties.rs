use proptest::prelude::*;

use xtt::elab::{Checker, Options, Status};
use xtt::harness::generate::generate_closed_bool;
use xtt::sexp;
use xtt::syntax::alpha_equal;

fn lit(b: bool) -> &'static str {
    if b {
        "tt"
    } else {
        "ff"
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Any seed, sizes past the fuzzer's range.
    #[test]
    fn generated_booleans_are_canonical(seed in any::<u64>(), size in 1usize..30) {
        let g = generate_closed_bool(seed, size);
        let src = format!("#normalize {} : bool expect {}", g.source, lit(g.expected));
        let mut checker = Checker::new(Options::default());
        let reports = checker.check_source(&src).map_err(|d| TestCaseError::fail(d.to_string()))?;
        let r = &reports[0];
        prop_assert_eq!(&r.status, &Status::Ok, "{}: {:?}", g.source, r.error);
    }

    /// Printed core drops annotations, so a redex whose argument is a bare
    /// λ cannot be re-elaborated; that is the only way reprinting may fail.
    #[test]
    fn printed_core_rechecks_unless_a_lambda_argument_lost_its_annotation(
        seed in any::<u64>(),
        size in 1usize..30,
    ) {
        let g = generate_closed_bool(seed, size);
        let mut checker = Checker::new(Options { double_check: true, ..Options::default() });
        let reports = checker
            .check_source(&format!("#check {} : bool", g.source))
            .map_err(|d| TestCaseError::fail(d.to_string()))?;
        if let Some(e) = &reports[0].error {
            let note = e.notes.join("\n");
            prop_assert!(note.contains("E025") && note.contains(") (\\"), "{}: {:?}", g.source, e);
        }
    }

    #[test]
    fn emitted_core_parses_back(seed in any::<u64>(), size in 1usize..20) {
        let g = generate_closed_bool(seed, size);
        let mut checker = Checker::new(Options::default());
        let reports = checker
            .check_source(&format!("#check {} : bool", g.source))
            .map_err(|d| TestCaseError::fail(d.to_string()))?;
        let (_, t) = reports[0].core.clone().expect("checked");
        let back = sexp::parse(&sexp::emit(&t)).map_err(|d| TestCaseError::fail(d.to_string()))?;
        prop_assert!(alpha_equal(&back, &t));
    }
}
