//! The checkable corpus, embedded, and the round trips run over it.

use crate::conv::{self, Verdict};
use crate::domain::{Env, Scope};
use crate::elab::{Checker, DeclReport};
use crate::eval::eval;
use crate::quote::quote;
use crate::sexp;
use crate::syntax::alpha_equal;

/// `(file name, source)`, in dependency order.
pub fn corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("prelude.xtt", include_str!("../../../../corpus/prelude.xtt")),
        ("uip.xtt", include_str!("../../../../corpus/uip.xtt")),
        ("kan-laws.xtt", include_str!("../../../../corpus/kan-laws.xtt")),
        ("typecase.xtt", include_str!("../../../../corpus/typecase.xtt")),
        ("negatives.xtt", include_str!("../../../../corpus/negatives.xtt")),
    ]
}

/// How one definition fared under the round trips.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub name: String,
    /// Re-evaluating the normal form gives a value convertible with the
    /// original.
    pub normal_form: bool,
    /// Parsing the emitted core gives back the same term.
    pub emitted: bool,
}

/// Runs both round trips over every declaration that produced core terms:
/// definitions, checks and normal forms.
pub fn round_trips(checker: &Checker, reports: &[DeclReport]) -> Vec<RoundTrip> {
    reports
        .iter()
        .filter_map(|r| r.core.as_ref().map(|core| (r, core)))
        .map(|(r, (ty, t))| {
            let sc = Scope::new(checker.session.clone());
            let ty_v = eval(&sc, &Env::default(), ty);
            let value = eval(&sc, &Env::default(), t);
            let nf = quote(&sc, &ty_v, &value);
            let again = eval(&sc, &Env::default(), &nf);
            let normal_form = conv::check_values(&sc, &ty_v, &value, &again) == Verdict::Equal;
            let emitted = [ty, t, &nf]
                .into_iter()
                .all(|c| sexp::parse(&sexp::emit(c)).is_ok_and(|back| alpha_equal(&back, c)));
            RoundTrip {
                name: format!("{} at byte {}", r.name, r.span.start),
                normal_form,
                emitted,
            }
        })
        .collect()
}
