//! Equational laws as conversion problems: the Kan operations at each code
//! former, El on codes, and the com decomposition on generated lines.
//!
//! Lines vary through generic paths of codes `P Q : path (_. U) bool^ bool^`,
//! which no equation can collapse to a constant, and every instance keeps
//! one dimension `j` free so that restrictions cannot fire.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conv::Verdict;
use crate::diag::Result;
use crate::elab::Checker;
use crate::surface::{parse_context, parse_expr};

/// `lhs ≡ rhs : ty` in `context`; without `ty`, `lhs ≡ rhs` as types.
#[derive(Clone, Debug)]
pub struct Law {
    pub role: String,
    pub context: String,
    pub ty: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

impl Law {
    fn new(role: &str, context: &str, ty: Option<&str>, lhs: &str, rhs: &str) -> Law {
        Law {
            role: role.into(),
            context: context.into(),
            ty: ty.map(Into::into),
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }

    /// Elaborates both sides and decides their conversion.
    pub fn decide(&self, checker: &Checker) -> Result<Verdict> {
        let cx = checker.context(&parse_context(&self.context)?)?;
        let (lhs, rhs) = (parse_expr(&self.lhs)?, parse_expr(&self.rhs)?);
        match &self.ty {
            Some(ty) => checker.convertible(&cx, &parse_expr(ty)?, &lhs, &rhs),
            None => checker.convertible_types(&cx, &lhs, &rhs),
        }
    }
}

const CODES: &str = "j : I, P : path (_. U) bool^ bool^, Q : path (_. U) bool^ bool^";

fn ctx(extra: &str) -> String {
    format!("{CODES}, {extra}")
}

/// One or two instances of each coe and hcom equation, grouped by equation:
/// `(equation, instances)`. Σ equations are stated on whole pairs, which
/// conversion compares componentwise.
pub fn kan_equations() -> Vec<(&'static str, Vec<Law>)> {
    let dep = |a: &str| format!("if (_. U) {a} (P @ i) (Q @ i)");
    let dep_j = |a: &str| format!("if (_. U) {a} (P @ j) (Q @ j)");
    vec![
        (
            "coe at sg^",
            vec![
                Law::new(
                    "coe at sg^, varying base",
                    &ctx("p : El (sg^ (P @ 0) (_. Q @ 0))"),
                    Some("El (sg^ (P @ j) (_. Q @ j))"),
                    "coe 0 j (i. sg^ (P @ i) (_. Q @ i)) p",
                    "(coe 0 j (i. P @ i) p.1, coe 0 j (i. Q @ i) p.2)",
                ),
                Law::new(
                    "coe at sg^, varying family",
                    &ctx("p : El (sg^ bool^ (x. if (_. U) x (P @ 0) (Q @ 0)))"),
                    Some(&format!("El (sg^ bool^ (x. {}))", dep_j("x"))),
                    &format!("coe 0 j (i. sg^ bool^ (x. {})) p", dep("x")),
                    &format!(
                        "(coe 0 j (_. bool^) p.1, coe 0 j (i. {}) p.2)",
                        dep("(coe 0 i (_. bool^) p.1)")
                    ),
                ),
            ],
        ),
        (
            "coe at pi^",
            vec![
                Law::new(
                    "coe at pi^, varying domain",
                    &ctx("f : El (pi^ (P @ 0) (_. Q @ 0)), a : El (P @ j)"),
                    Some("El (Q @ j)"),
                    "(coe 0 j (i. pi^ (P @ i) (_. Q @ i)) f) a",
                    "coe 0 j (i. Q @ i) (f (coe j 0 (i. P @ i) a))",
                ),
                Law::new(
                    "coe at pi^, varying family",
                    &ctx("f : El (pi^ bool^ (x. if (_. U) x (P @ 0) (Q @ 0))), c : bool"),
                    Some(&format!("El ({})", dep_j("c"))),
                    &format!("(coe 0 j (i. pi^ bool^ (x. {})) f) c", dep("x")),
                    &format!(
                        "coe 0 j (i. {}) (f (coe j 0 (_. bool^) c))",
                        dep("(coe j i (_. bool^) c)")
                    ),
                ),
            ],
        ),
        (
            "coe at path^",
            vec![Law::new(
                "coe at path^",
                &ctx("x0 : El (P @ 0), x1 : El (P @ 0), p : El (path^ (_. P @ 0) x0 x1)"),
                Some("El (path^ (_. P @ j) (coe 0 j (k. P @ k) x0) (coe 0 j (k. P @ k) x1))"),
                "coe 0 j (i. path^ (_. P @ i) (coe 0 i (k. P @ k) x0) (coe 0 i (k. P @ k) x1)) p",
                "<m> com 0 j m (i. P @ i) (i. [ i = 0 -> p @ m \
                 | dd m -> [ m = 0 -> coe 0 i (k. P @ k) x0 | m = 1 -> coe 0 i (k. P @ k) x1 ] ])",
            )],
        ),
        (
            "hcom at sg^",
            vec![
                Law::new(
                    "hcom at sg^, constant family",
                    &ctx("c : El (sg^ (P @ j) (_. Q @ j)), d : El (sg^ (P @ j) (_. Q @ j)), \
                          q : path (_. El (sg^ (P @ j) (_. Q @ j))) c d"),
                    Some("El (sg^ (P @ j) (_. Q @ j))"),
                    "hcom 0 1 j (sg^ (P @ j) (_. Q @ j)) (k. q @ k)",
                    "(hcom 0 1 j (P @ j) (k. (q @ k).1), com 0 1 j (_. Q @ j) (k. (q @ k).2))",
                ),
                // hcom at bool^ is its cap, so a tube whose first component
                // varies would not fit the family; the bool part is fixed.
                Law::new(
                    "hcom at sg^, dependent family",
                    &ctx(&format!(
                        "b : bool, y : El ({0}), z : El ({0}), w : path (_. El ({0})) y z",
                        dep_j("b")
                    )),
                    Some(&format!("El (sg^ bool^ (x. {}))", dep_j("x"))),
                    &format!("hcom 0 1 j (sg^ bool^ (x. {})) (k. (b, w @ k))", dep_j("x")),
                    &format!(
                        "(hcom 0 1 j bool^ (k. b), com 0 1 j (i. {}) (k. w @ k))",
                        dep_j("(hcom 0 i j bool^ (k. b))")
                    ),
                ),
            ],
        ),
        (
            "hcom at pi^",
            vec![
                Law::new(
                    "hcom at pi^, constant family",
                    &ctx("f : El (pi^ (P @ j) (_. Q @ j)), g : El (pi^ (P @ j) (_. Q @ j)), \
                          q : path (_. El (pi^ (P @ j) (_. Q @ j))) f g, a : El (P @ j)"),
                    Some("El (Q @ j)"),
                    "(hcom 0 1 j (pi^ (P @ j) (_. Q @ j)) (k. q @ k)) a",
                    "hcom 0 1 j (Q @ j) (k. (q @ k) a)",
                ),
                Law::new(
                    "hcom at pi^, dependent family",
                    &ctx(&format!(
                        "f : El (pi^ bool^ (x. {0})), g : El (pi^ bool^ (x. {0})), \
                         q : path (_. El (pi^ bool^ (x. {0}))) f g, c : bool",
                        dep_j("x")
                    )),
                    Some(&format!("El ({})", dep_j("c"))),
                    &format!("(hcom 0 1 j (pi^ bool^ (x. {})) (k. q @ k)) c", dep_j("x")),
                    &format!("hcom 0 1 j ({}) (k. (q @ k) c)", dep_j("c")),
                ),
            ],
        ),
        (
            "hcom at path^",
            vec![Law::new(
                "hcom at path^",
                &ctx("x0 : El (P @ j), x1 : El (P @ j), u : El (path^ (_. P @ j) x0 x1), \
                      v : El (path^ (_. P @ j) x0 x1), q : path (_. El (path^ (_. P @ j) x0 x1)) u v"),
                Some("El (path^ (_. P @ j) x0 x1)"),
                "hcom 0 1 j (path^ (_. P @ j) x0 x1) (k. q @ k)",
                "<m> hcom 0 1 j (P @ j) (k. [ k = 0 \\/ dd j -> q @ k @ m \
                 | dd m -> [ m = 0 -> x0 | m = 1 -> x1 ] ])",
            )],
        ),
        (
            "hcom at bool^",
            vec![Law::new(
                "hcom at bool^",
                &ctx("b : bool, c : bool, q : path (_. bool) b c"),
                Some("bool"),
                "hcom 0 1 j bool^ (k. q @ k)",
                "q @ 0",
            )],
        ),
    ]
}

/// El on each code former against the type former it decodes to.
pub fn el_equations() -> Vec<Law> {
    let fam = "A : U, B : El A -> U";
    vec![
        Law::new("El at pi^", fam, None, "El (pi^ A (x. B x))", "(x : El A) -> El (B x)"),
        Law::new("El at sg^", fam, None, "El (sg^ A (x. B x))", "(x : El A) * El (B x)"),
        Law::new(
            "El at path^",
            "P : path (_. U) bool^ bool^, a : El (P @ 0), b : El (P @ 1)",
            None,
            "El (path^ (i. P @ i) a b)",
            "path (i. El (P @ i)) a b",
        ),
        Law::new("El at bool^", "", None, "El bool^", "bool"),
    ]
}

/// Code lines over a dimension, built from `bool^`, the generic lines
/// `P`, `Q`, and the code formers.
#[derive(Clone, Debug)]
enum Line {
    Bool,
    P,
    Q,
    Pi(Box<Line>, Box<Line>),
    Sg(Box<Line>, Box<Line>),
    /// `pi^`/`sg^` over `bool^` with a family choosing between two lines.
    DepPi(Box<Line>, Box<Line>),
    DepSg(Box<Line>, Box<Line>),
    /// `path^` in `P` between the transports of `a0` and `a1`.
    PathP,
}

impl Line {
    fn random(rng: &mut ChaCha8Rng, depth: usize) -> Line {
        let leaf = depth == 0 || rng.gen_bool(0.3);
        if leaf {
            return [Line::Bool, Line::P, Line::Q, Line::PathP]
                .choose(rng)
                .expect("non-empty")
                .clone();
        }
        let mut sub = || Box::new(Line::random(rng, depth - 1));
        let (a, b) = (sub(), sub());
        match rng.gen_range(0..4) {
            0 => Line::Pi(a, b),
            1 => Line::Sg(a, b),
            2 => Line::DepPi(a, b),
            _ => Line::DepSg(a, b),
        }
    }

    /// The code at dimension `i` (a dimension expression).
    fn at(&self, i: &str) -> String {
        match self {
            Line::Bool => "bool^".into(),
            Line::P => format!("(P @ {i})"),
            Line::Q => format!("(Q @ {i})"),
            Line::Pi(a, b) => format!("(pi^ {} (_. {}))", a.at(i), b.at(i)),
            Line::Sg(a, b) => format!("(sg^ {} (_. {}))", a.at(i), b.at(i)),
            Line::DepPi(a, b) => format!("(pi^ bool^ (x. if (_. U) x {} {}))", a.at(i), b.at(i)),
            Line::DepSg(a, b) => format!("(sg^ bool^ (x. if (_. U) x {} {}))", a.at(i), b.at(i)),
            Line::PathP => {
                format!("(path^ (_. P @ {i}) (coe 0 {i} (l. P @ l) a0) (coe 0 {i} (l. P @ l) a1))")
            }
        }
    }
}

/// One generated composition problem, with the two ways of splitting it
/// into hcom and coe.
#[derive(Clone, Debug)]
pub struct ComInstance {
    /// `com r r' s A t ≡ coe r' r' A (hcom r r' s A(r') (k. coe k r' A t(k)))`:
    /// composing in the target fibre; the evaluator's definition of com.
    pub via_target: Law,
    /// `com r r' s A t ≡ coe r r' A (hcom r r' s A(r) (k. coe k r A t(k)))`:
    /// composing in the source fibre and transporting the result. Agrees
    /// with the above only where `coe r r' (coe r' r x)` computes to `x`.
    pub via_source: Law,
}

/// Generated composition problems over random code lines. The tube
/// `k ↦ coe 0 k A (q @ k)` is total, varies in `k`, and is built from a
/// generic path `q` at `A(0)`.
pub fn com_instances(seed: u64, n: usize) -> Vec<ComInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = ["0", "1", "j", "m"];
    (0..n)
        .map(|k| {
            let line = Line::random(&mut rng, 2);
            let r = *dims.choose(&mut rng).expect("non-empty");
            let others: Vec<&str> = dims.iter().copied().filter(|d| *d != r).collect();
            let r2 = *others.choose(&mut rng).expect("non-empty");
            let s = *dims.choose(&mut rng).expect("non-empty");
            let a0 = line.at("0");
            let context = format!(
                "j : I, m : I, P : path (_. U) bool^ bool^, Q : path (_. U) bool^ bool^, \
                 a0 : El (P @ 0), a1 : El (P @ 0), u : El {a0}, v : El {a0}, q : path (_. El {a0}) u v"
            );
            let a = format!("(i. {})", line.at("i"));
            let tube = "(coe 0 k {a} (q @ k))".replace("{a}", &a);
            let com = format!("com {r} {r2} {s} {a} (k. {tube})");
            let via = |fibre: &str| Law {
                role: format!("com #{k} through A({fibre}): com {r} {r2} {s} {a}"),
                context: context.clone(),
                ty: Some(format!("El {}", line.at(r2))),
                lhs: com.clone(),
                rhs: format!(
                    "coe {fibre} {r2} {a} (hcom {r} {r2} {s} {} (k. coe k {fibre} {a} {tube}))",
                    line.at(fibre)
                ),
            };
            ComInstance {
                via_target: via(r2),
                via_source: via(r),
            }
        })
        .collect()
}
