//! The core calculus: dimensions, face formulas and elaborated terms.
//!
//! Core terms are nameless. Term variables and dimension variables live in
//! two separate de Bruijn index spaces, so a dimension binder does not shift
//! term indices and vice versa. Names survive only as display hints and are
//! ignored by equality, which makes `==` on terms alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

/// A display hint for a bound variable. Two names always compare equal.
#[derive(Clone, Default)]
pub struct Name(pub Rc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Rc::from(s))
    }

    pub fn anon() -> Name {
        Name::new("_")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Name) -> bool {
        true
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

/// An element of the interval.
///
/// In core terms `Var` holds a de Bruijn index over dimension binders; in the
/// semantic domain and the face solver it holds a de Bruijn level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Zero,
    One,
    Var(u32),
}

impl Dim {
    pub fn is_const(self) -> bool {
        !matches!(self, Dim::Var(_))
    }
}

/// A face formula (cofibration): dimension equations closed under binary
/// disjunction. Falsehood and boundaries are derived forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Dim, Dim),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn eq(r: Dim, s: Dim) -> Formula {
        Formula::Eq(r, s)
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    /// `0 = 1`
    pub fn bottom() -> Formula {
        Formula::Eq(Dim::Zero, Dim::One)
    }

    /// `∂r`, that is `(r = 0) ∨ (r = 1)`.
    pub fn boundary(r: Dim) -> Formula {
        Formula::Eq(r, Dim::Zero).or(Formula::Eq(r, Dim::One))
    }

    /// The atomic equations of the formula, left to right.
    pub fn atoms(&self) -> Vec<(Dim, Dim)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<(Dim, Dim)>) {
        match self {
            Formula::Eq(r, s) => out.push((*r, *s)),
            Formula::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) => 1,
            Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn map_dims(&self, f: &mut impl FnMut(Dim) -> Dim) -> Formula {
        match self {
            Formula::Eq(r, s) => Formula::Eq(f(*r), f(*s)),
            Formula::Or(l, r) => Formula::Or(Box::new(l.map_dims(f)), Box::new(r.map_dims(f))),
        }
    }

    pub fn dims(&self) -> impl Iterator<Item = Dim> {
        self.atoms().into_iter().flat_map(|(r, s)| [r, s])
    }

    /// Disjunction of a non-empty list, associated to the left.
    pub fn disjunction(mut formulas: Vec<Formula>) -> Option<Formula> {
        if formulas.is_empty() {
            return None;
        }
        let first = formulas.remove(0);
        Some(formulas.into_iter().fold(first, Formula::or))
    }
}

pub type RcTerm = Rc<Term>;

/// Elaborated terms.
///
/// Binder arity per variant (term binders, dimension binders):
/// `Lam`, `Pi`, `Sg`, `CodePi`, `CodeSg` bind (1, 0) in their last field;
/// `DLam`, the lines of `Path`, `CodePath`, `Coe` and `Com`, and the tube of
/// `Com` bind (0, 1); the `If` and `TypeCase` motives bind (1, 0); the
/// typecase `pi` and `sg` branches bind (2, 0) and the `path` branch (5, 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Lam(Name, RcTerm),
    App(RcTerm, RcTerm),
    Pair(RcTerm, RcTerm),
    Fst(RcTerm),
    Snd(RcTerm),
    DLam(Name, RcTerm),
    DApp(RcTerm, Dim),
    Tt,
    Ff,
    If {
        motive: (Name, RcTerm),
        scrut: RcTerm,
        tt: RcTerm,
        ff: RcTerm,
    },
    Abort,
    /// A partial element; one or two branches.
    Split(Vec<(Formula, RcTerm)>),
    Coe {
        from: Dim,
        to: Dim,
        line: (Name, RcTerm),
        arg: RcTerm,
    },
    Com {
        from: Dim,
        to: Dim,
        wall: Dim,
        line: (Name, RcTerm),
        tube: (Name, RcTerm),
    },
    Pi(Name, RcTerm, RcTerm),
    Sg(Name, RcTerm, RcTerm),
    Path {
        line: (Name, RcTerm),
        left: RcTerm,
        right: RcTerm,
    },
    Bool,
    Univ,
    El(RcTerm),
    CodePi(Name, RcTerm, RcTerm),
    CodeSg(Name, RcTerm, RcTerm),
    CodePath {
        line: (Name, RcTerm),
        left: RcTerm,
        right: RcTerm,
    },
    CodeBool,
    TypeCase {
        motive: (Name, RcTerm),
        scrut: RcTerm,
        pi: ([Name; 2], RcTerm),
        sg: ([Name; 2], RcTerm),
        path: ([Name; 5], RcTerm),
        bool: RcTerm,
    },
}

/// Alpha-equivalence. Names are display hints, so this is structural equality.
pub fn alpha_equal(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

/// Generic traversal that rebuilds a term, calling `var` on every term
/// variable and `dim` on every dimension, together with the number of term
/// and dimension binders crossed so far.
struct Traversal<'a> {
    var: &'a mut dyn FnMut(u32, u32, u32) -> Term,
    dim: &'a mut dyn FnMut(Dim, u32) -> Dim,
}

impl Traversal<'_> {
    fn dim_at(&mut self, r: Dim, dd: u32) -> Dim {
        (self.dim)(r, dd)
    }

    fn formula_at(&mut self, phi: &Formula, dd: u32) -> Formula {
        phi.map_dims(&mut |r| (self.dim)(r, dd))
    }

    fn go(&mut self, t: &Term, td: u32, dd: u32) -> RcTerm {
        Rc::new(self.go_inner(t, td, dd))
    }

    fn go_inner(&mut self, t: &Term, td: u32, dd: u32) -> Term {
        use Term::*;
        match t {
            Var(ix) => (self.var)(*ix, td, dd),
            Lam(x, b) => Lam(x.clone(), self.go(b, td + 1, dd)),
            App(f, a) => App(self.go(f, td, dd), self.go(a, td, dd)),
            Pair(a, b) => Pair(self.go(a, td, dd), self.go(b, td, dd)),
            Fst(p) => Fst(self.go(p, td, dd)),
            Snd(p) => Snd(self.go(p, td, dd)),
            DLam(i, b) => DLam(i.clone(), self.go(b, td, dd + 1)),
            DApp(p, r) => DApp(self.go(p, td, dd), self.dim_at(*r, dd)),
            Tt => Tt,
            Ff => Ff,
            If {
                motive,
                scrut,
                tt,
                ff,
            } => If {
                motive: (motive.0.clone(), self.go(&motive.1, td + 1, dd)),
                scrut: self.go(scrut, td, dd),
                tt: self.go(tt, td, dd),
                ff: self.go(ff, td, dd),
            },
            Abort => Abort,
            Split(branches) => Split(
                branches
                    .iter()
                    .map(|(phi, b)| (self.formula_at(phi, dd), self.go(b, td, dd)))
                    .collect(),
            ),
            Coe {
                from,
                to,
                line,
                arg,
            } => Coe {
                from: self.dim_at(*from, dd),
                to: self.dim_at(*to, dd),
                line: (line.0.clone(), self.go(&line.1, td, dd + 1)),
                arg: self.go(arg, td, dd),
            },
            Com {
                from,
                to,
                wall,
                line,
                tube,
            } => Com {
                from: self.dim_at(*from, dd),
                to: self.dim_at(*to, dd),
                wall: self.dim_at(*wall, dd),
                line: (line.0.clone(), self.go(&line.1, td, dd + 1)),
                tube: (tube.0.clone(), self.go(&tube.1, td, dd + 1)),
            },
            Pi(x, a, b) => Pi(x.clone(), self.go(a, td, dd), self.go(b, td + 1, dd)),
            Sg(x, a, b) => Sg(x.clone(), self.go(a, td, dd), self.go(b, td + 1, dd)),
            Path { line, left, right } => Path {
                line: (line.0.clone(), self.go(&line.1, td, dd + 1)),
                left: self.go(left, td, dd),
                right: self.go(right, td, dd),
            },
            Bool => Bool,
            Univ => Univ,
            El(c) => El(self.go(c, td, dd)),
            CodePi(x, a, b) => CodePi(x.clone(), self.go(a, td, dd), self.go(b, td + 1, dd)),
            CodeSg(x, a, b) => CodeSg(x.clone(), self.go(a, td, dd), self.go(b, td + 1, dd)),
            CodePath { line, left, right } => CodePath {
                line: (line.0.clone(), self.go(&line.1, td, dd + 1)),
                left: self.go(left, td, dd),
                right: self.go(right, td, dd),
            },
            CodeBool => CodeBool,
            TypeCase {
                motive,
                scrut,
                pi,
                sg,
                path,
                bool,
            } => TypeCase {
                motive: (motive.0.clone(), self.go(&motive.1, td + 1, dd)),
                scrut: self.go(scrut, td, dd),
                pi: (pi.0.clone(), self.go(&pi.1, td + 2, dd)),
                sg: (sg.0.clone(), self.go(&sg.1, td + 2, dd)),
                path: (path.0.clone(), self.go(&path.1, td + 5, dd)),
                bool: self.go(bool, td, dd),
            },
        }
    }
}

/// Adds `by_terms` to every free term index at or above `term_cutoff` and
/// `by_dims` to every free dimension index at or above `dim_cutoff`.
pub fn shift(t: &Term, by_terms: u32, term_cutoff: u32, by_dims: u32, dim_cutoff: u32) -> Term {
    Traversal {
        var: &mut |ix, td, _| {
            if ix >= td + term_cutoff {
                Term::Var(ix + by_terms)
            } else {
                Term::Var(ix)
            }
        },
        dim: &mut |r, dd| match r {
            Dim::Var(ix) if ix >= dd + dim_cutoff => Dim::Var(ix + by_dims),
            r => r,
        },
    }
    .go_inner(t, 0, 0)
}

/// A simultaneous substitution. Entry `k` of `terms` (resp. `dims`) replaces
/// free index `k`; every replacement lives in the target context.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    pub terms: Vec<Term>,
    pub dims: Vec<Dim>,
}

impl Subst {
    /// The identity on a context with `terms` term and `dims` dimension variables.
    pub fn identity(terms: u32, dims: u32) -> Subst {
        Subst {
            terms: (0..terms).map(Term::Var).collect(),
            dims: (0..dims).map(Dim::Var).collect(),
        }
    }

    /// `self` after `inner`: `t[inner][self] = t[self ∘ inner]`.
    pub fn compose(&self, inner: &Subst) -> Subst {
        Subst {
            terms: inner.terms.iter().map(|t| substitute(t, self)).collect(),
            dims: inner.dims.iter().map(|r| apply_dim(*r, &self.dims)).collect(),
        }
    }
}

fn apply_dim(r: Dim, dims: &[Dim]) -> Dim {
    match r {
        Dim::Var(ix) => *dims
            .get(ix as usize)
            .unwrap_or_else(|| panic!("scoping fault: dimension index {ix} out of range")),
        r => r,
    }
}

/// Capture-avoiding simultaneous substitution.
pub fn substitute(t: &Term, subst: &Subst) -> Term {
    Traversal {
        var: &mut |ix, td, dd| {
            if ix < td {
                Term::Var(ix)
            } else {
                let k = (ix - td) as usize;
                let replacement = subst
                    .terms
                    .get(k)
                    .unwrap_or_else(|| panic!("scoping fault: term index {ix} out of range"));
                shift(replacement, td, 0, dd, 0)
            }
        },
        dim: &mut |r, dd| match r {
            Dim::Var(ix) if ix < dd => r,
            Dim::Var(ix) => match apply_dim(Dim::Var(ix - dd), &subst.dims) {
                Dim::Var(k) => Dim::Var(k + dd),
                c => c,
            },
            c => c,
        },
    }
    .go_inner(t, 0, 0)
}

/// Free dimension variables of `t`, as indices relative to `t`'s context.
pub fn free_dimensions(t: &Term) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    Traversal {
        var: &mut |ix, _, _| Term::Var(ix),
        dim: &mut |r, dd| {
            if let Dim::Var(ix) = r {
                if ix >= dd {
                    out.insert(ix - dd);
                }
            }
            r
        },
    }
    .go_inner(t, 0, 0);
    out
}

/// Free term variables of `t`, as indices relative to `t`'s context.
pub fn free_variables(t: &Term) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    Traversal {
        var: &mut |ix, td, _| {
            if ix >= td {
                out.insert(ix - td);
            }
            Term::Var(ix)
        },
        dim: &mut |r, _| r,
    }
    .go_inner(t, 0, 0);
    out
}

/// Whether every variable of `t` is bound or below the given context sizes.
/// Also rejects empty or over-long core splits.
pub fn well_scoped(t: &Term, terms: u32, dims: u32) -> bool {
    let vars_ok = free_variables(t).iter().all(|&ix| ix < terms);
    let dims_ok = free_dimensions(t).iter().all(|&ix| ix < dims);
    vars_ok && dims_ok && splits_ok(t)
}

fn splits_ok(t: &Term) -> bool {
    let mut ok = true;
    visit(t, &mut |t| {
        if let Term::Split(bs) = t {
            if bs.is_empty() || bs.len() > 2 {
                ok = false;
            }
        }
    });
    ok
}

/// Pre-order visit of every subterm.
pub fn visit(t: &Term, f: &mut impl FnMut(&Term)) {
    use Term::*;
    f(t);
    match t {
        Var(_) | Tt | Ff | Abort | Bool | Univ | CodeBool => {}
        Lam(_, b) | DLam(_, b) | Fst(b) | Snd(b) | DApp(b, _) | El(b) => visit(b, f),
        App(a, b) | Pair(a, b) | Pi(_, a, b) | Sg(_, a, b) | CodePi(_, a, b) | CodeSg(_, a, b) => {
            visit(a, f);
            visit(b, f);
        }
        If {
            motive,
            scrut,
            tt,
            ff,
        } => {
            visit(&motive.1, f);
            visit(scrut, f);
            visit(tt, f);
            visit(ff, f);
        }
        Split(bs) => bs.iter().for_each(|(_, b)| visit(b, f)),
        Coe { line, arg, .. } => {
            visit(&line.1, f);
            visit(arg, f);
        }
        Com { line, tube, .. } => {
            visit(&line.1, f);
            visit(&tube.1, f);
        }
        Path { line, left, right } | CodePath { line, left, right } => {
            visit(&line.1, f);
            visit(left, f);
            visit(right, f);
        }
        TypeCase {
            motive,
            scrut,
            pi,
            sg,
            path,
            bool,
        } => {
            visit(&motive.1, f);
            visit(scrut, f);
            visit(&pi.1, f);
            visit(&sg.1, f);
            visit(&path.1, f);
            visit(bool, f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(t: Term) -> RcTerm {
        Rc::new(t)
    }

    #[test]
    fn lambdas_equal_up_to_names() {
        let a = Term::Lam("x".into(), rc(Term::Var(0)));
        let b = Term::Lam("y".into(), rc(Term::Var(0)));
        assert!(alpha_equal(&a, &b));
        assert!(!alpha_equal(&Term::Tt, &Term::Ff));
    }

    #[test]
    fn coe_lines_equal_up_to_dimension_names() {
        let coe = |n: &str| Term::Coe {
            from: Dim::Zero,
            to: Dim::One,
            line: (n.into(), rc(Term::CodeBool)),
            arg: rc(Term::Tt),
        };
        assert!(alpha_equal(&coe("i"), &coe("j")));
    }

    #[test]
    fn identity_substitution() {
        let t = Term::App(rc(Term::Var(1)), rc(Term::DApp(rc(Term::Var(0)), Dim::Var(0))));
        assert_eq!(substitute(&t, &Subst::identity(2, 1)), t);
    }

    #[test]
    fn path_line_endpoint_by_substitution() {
        // i ⊢ path^ (_. bool^) (p @ i) tt  with p free; [0/i]
        let line = Term::CodePath {
            line: ("_".into(), rc(Term::CodeBool)),
            left: rc(Term::DApp(rc(Term::Var(0)), Dim::Var(0))),
            right: rc(Term::Tt),
        };
        let at_zero = substitute(
            &line,
            &Subst {
                terms: vec![Term::Var(0)],
                dims: vec![Dim::Zero],
            },
        );
        let expected = Term::CodePath {
            line: ("_".into(), rc(Term::CodeBool)),
            left: rc(Term::DApp(rc(Term::Var(0)), Dim::Zero)),
            right: rc(Term::Tt),
        };
        assert_eq!(at_zero, expected);
    }

    #[test]
    fn if_motive_at_tt() {
        // x ⊢ El (if (_. U) x bool^ bool^) ; [tt/x]
        let motive = Term::El(rc(Term::If {
            motive: ("_".into(), rc(Term::Univ)),
            scrut: rc(Term::Var(0)),
            tt: rc(Term::CodeBool),
            ff: rc(Term::CodeBool),
        }));
        let out = substitute(
            &motive,
            &Subst {
                terms: vec![Term::Tt],
                dims: vec![],
            },
        );
        assert!(matches!(&out, Term::El(c) if matches!(&**c, Term::If { scrut, .. } if **scrut == Term::Tt)));
    }

    #[test]
    fn free_dimensions_examples() {
        assert!(free_dimensions(&Term::DLam("i".into(), rc(Term::DApp(rc(Term::Var(0)), Dim::Var(0))))).is_empty());
        assert!(free_dimensions(&Term::Tt).is_empty());
        // path^ (i. path^ (_. bool^) (p @ j) tt) ... with j free (index 0 outside, 1 inside the binder)
        let t = Term::CodePath {
            line: (
                "i".into(),
                rc(Term::CodePath {
                    line: ("_".into(), rc(Term::CodeBool)),
                    left: rc(Term::DApp(rc(Term::Var(0)), Dim::Var(1))),
                    right: rc(Term::Tt),
                }),
            ),
            left: rc(Term::Var(1)),
            right: rc(Term::Var(2)),
        };
        assert_eq!(free_dimensions(&t), [0].into_iter().collect());
    }

    #[test]
    #[should_panic(expected = "scoping fault")]
    fn out_of_range_substitution_panics() {
        substitute(&Term::Var(3), &Subst::identity(1, 0));
    }

    #[test]
    fn boundary_is_derived() {
        let b = Formula::boundary(Dim::Var(0));
        assert_eq!(b.atoms(), vec![(Dim::Var(0), Dim::Zero), (Dim::Var(0), Dim::One)]);
        assert_eq!(Formula::bottom(), Formula::Eq(Dim::Zero, Dim::One));
    }
}
