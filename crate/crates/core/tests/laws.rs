use xtt::elab::{Checker, Options};
use xtt::harness::laws::{com_instances, el_equations, kan_equations, Law};

fn decide(law: &Law) -> String {
    format!("{:?}", law.decide(&Checker::new(Options::default())))
}

fn holds(law: &Law) {
    let verdict = decide(law);
    assert_eq!(verdict, "Ok(Equal)", "{}\n  {} ≡ {}", law.role, law.lhs, law.rhs);
}

#[test]
fn kan_equations_hold_with_a_free_dimension() {
    let eqs = kan_equations();
    assert_eq!(eqs.len(), 7);
    eqs.iter().flat_map(|(_, laws)| laws).for_each(holds);
}

#[test]
fn el_decodes_each_code_former() {
    el_equations().iter().for_each(holds);
}

#[test]
fn com_decomposes_through_the_target_fibre() {
    com_instances(7, 20).iter().map(|c| &c.via_target).for_each(holds);
}

/// Transporting a source-fibre composite needs `coe r r' (coe r' r x) ≡ x`,
/// which is not judgmental along neutral lines; it holds where the line
/// lets the round trip compute or a restriction removes it.
#[test]
fn com_through_the_source_fibre_holds_only_where_round_trips_compute() {
    let held: Vec<usize> = com_instances(7, 20)
        .iter()
        .enumerate()
        .filter(|(_, c)| decide(&c.via_source) == "Ok(Equal)")
        .map(|(k, _)| k)
        .collect();
    assert_eq!(held, [3, 9, 18]);
    // #18 is a constant line, where coe is the identity.
    assert!(com_instances(7, 20)[18].via_source.lhs.contains("(i. bool^)"));
}
