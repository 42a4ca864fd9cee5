//! The canonicity fuzzer: generated closed booleans must elaborate and
//! normalize to exactly the literal they were built to denote.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diag::Diagnostic;
use crate::elab::{Checker, Options};
use crate::harness::generate::{generate_closed_bool, Generated};
use crate::surface::parse_expr;
use crate::syntax::Term;

/// Sizes cycle through this range so that every batch mixes small and large
/// terms.
pub const MAX_SIZE: usize = 12;

#[derive(Clone, Debug)]
pub enum Verdict {
    Canonical(bool),
    /// Rejected by the parser or the elaborator (including undecided
    /// conversions).
    Rejected(Diagnostic),
    /// Normalized to something other than a literal.
    NotCanonical(String),
    /// Normalized to the other literal.
    WrongValue(bool),
}

#[derive(Clone, Debug)]
pub struct Case {
    pub term: Generated,
    pub verdict: Verdict,
    pub branches_split: usize,
    /// The smallest failing term with the same seed, for failures.
    pub shrunk: Option<Generated>,
}

impl Case {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Canonical(_))
    }
}

/// Elaborates and normalizes one term in a fresh session.
pub fn run_one(term: &Generated, options: &Options) -> (Verdict, usize) {
    let checker = Checker::new(options.clone());
    let expr = match parse_expr(&term.source) {
        Ok(e) => e,
        Err(d) => return (Verdict::Rejected(d), 0),
    };
    let cx = checker.empty_ctx();
    let bool_ty = parse_expr("bool").expect("bool parses");
    let verdict = match checker.normalize(&cx, &expr, &bool_ty) {
        Err(d) => Verdict::Rejected(d),
        Ok(t @ (Term::Tt | Term::Ff)) => {
            let value = t == Term::Tt;
            if value == term.expected {
                Verdict::Canonical(value)
            } else {
                Verdict::WrongValue(value)
            }
        }
        Ok(other) => Verdict::NotCanonical(cx.show(&other)),
    };
    (verdict, checker.session.splits_taken.get())
}

/// Replays the failing seed at increasing sizes and keeps the first failure.
fn shrink(term: &Generated, options: &Options) -> Generated {
    for size in 1..term.size {
        let smaller = generate_closed_bool(term.seed, size);
        if !matches!(run_one(&smaller, options).0, Verdict::Canonical(_)) {
            return smaller;
        }
    }
    term.clone()
}

/// The seed and size of the `k`-th case of a run.
pub fn case_seeds(seed: u64, n: usize) -> Vec<(u64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|k| (rng.gen(), 1 + k % MAX_SIZE)).collect()
}

/// Runs `n` cases derived from `seed`.
pub fn fuzz(n: usize, seed: u64, options: &Options) -> Vec<Case> {
    case_seeds(seed, n)
        .into_iter()
        .map(|(case_seed, size)| {
            let term = generate_closed_bool(case_seed, size);
            let (verdict, branches_split) = run_one(&term, options);
            let shrunk = (!matches!(verdict, Verdict::Canonical(_))).then(|| shrink(&term, options));
            Case {
                term,
                verdict,
                branches_split,
                shrunk,
            }
        })
        .collect()
}
