//! Unannotated β-redexes, as printed from core with globals inlined.

use xtt::elab::{Checker, Options, Status};
use xtt::surface::parse_expr;

fn normal(e: &str, ty: &str) -> Result<String, String> {
    let c = Checker::new(Options::default());
    let cx = c.empty_ctx();
    c.normalize(&cx, &parse_expr(e).unwrap(), &parse_expr(ty).unwrap())
        .map(|t| cx.show(&t))
        .map_err(|d| d.to_string())
}

#[test]
fn spines_define_each_binder() {
    assert_eq!(normal("(\\x. \\y. x) tt ff", "bool").unwrap(), "tt");
    assert_eq!(normal("(\\x y. if (_. bool) x y ff) tt ff", "bool").unwrap(), "ff");
    // Later binder types mention earlier binders.
    assert_eq!(normal("(\\A. \\a. a) bool^ tt", "bool").unwrap(), "tt");
}

#[test]
fn path_abstractions_infer_their_line() {
    assert_eq!(normal("(\\p. p @ 0) (<_> tt)", "bool").unwrap(), "tt");
}

#[test]
fn residual_lambdas_are_checked() {
    assert_eq!(normal("(\\b. \\x. if (_. bool) b x ff) tt", "bool -> bool").unwrap(), "\\x. x");
}

#[test]
fn lambda_arguments_still_need_annotations() {
    assert!(normal("(\\f. f tt) (\\x. x)", "bool").unwrap_err().starts_with("E025"));
}

#[test]
fn projections_out_of_literal_pairs_infer() {
    let mut c = Checker::new(Options { double_check: true, ..Options::default() });
    let r = c.check_source("#check ((tt, <_> ff) .2) @ 0 : bool").unwrap();
    assert_eq!(r[0].status, Status::Ok, "{:?}", r[0].error);
}
