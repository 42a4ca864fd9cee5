//! Bidirectional elaboration of surface terms into the core calculus.
//!
//! Introductions are checked, eliminations inferred. A term of type `U`
//! used where a type is expected is decoded implicitly, and type-former
//! syntax checked against `U` elaborates to the corresponding code, so
//! `bool` and `bool^` are interchangeable in code position.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use crate::conv::{self, Verdict};
use crate::diag::{Code, Diagnostic, Result, Span};
use crate::domain::*;
use crate::eval::*;
use crate::face::SolverState;
use crate::pretty::{self, Names};
use crate::quote::{quote, quote_type};
use crate::surface::*;
use crate::syntax::{alpha_equal, shift, Dim, Formula, Name, RcTerm, Term};

fn rc(t: Term) -> RcTerm {
    Rc::new(t)
}

#[derive(Clone, Debug)]
enum Entry {
    Term { name: String, ty: Val },
    Dim { name: String },
    Formula,
}

/// A typing context: named entries plus the scope and identity environment
/// used to evaluate core terms in it.
#[derive(Clone)]
pub struct Ctx {
    pub scope: Scope,
    pub env: Env,
    entries: Vec<Entry>,
}

enum Lookup {
    Term(u32, Val),
    Dim(u32),
    Missing,
}

impl Ctx {
    pub fn empty(session: Rc<Session>) -> Ctx {
        Ctx {
            scope: Scope::new(session),
            env: Env::default(),
            entries: Vec::new(),
        }
    }

    pub fn bind_term(&self, name: &str, ty: Val) -> (Ctx, Val) {
        let (scope, var) = self.scope.bind_term(ty.clone());
        let mut cx = self.clone();
        cx.scope = scope;
        cx.env = cx.env.push_term(var.clone());
        cx.entries.push(Entry::Term {
            name: name.to_string(),
            ty,
        });
        (cx, var)
    }

    /// Binds `name` to a known value, as for the binder of a β-redex. The
    /// entry still occupies a level so quoted terms index like the env.
    pub fn define(&self, name: &str, ty: Val, value: Val) -> Ctx {
        let (scope, _) = self.scope.bind_term(ty.clone());
        let mut cx = self.clone();
        cx.scope = scope;
        cx.env = cx.env.push_term(value);
        cx.entries.push(Entry::Term {
            name: name.to_string(),
            ty,
        });
        cx
    }

    pub fn bind_dim(&self, name: &str) -> (Ctx, Dim) {
        let (scope, r) = self.scope.bind_dim();
        let mut cx = self.clone();
        cx.scope = scope;
        cx.env = cx.env.push_dim(r);
        cx.entries.push(Entry::Dim { name: name.to_string() });
        (cx, r)
    }

    /// `phi` is a semantic formula (over levels).
    pub fn assume(&self, phi: &Formula) -> Ctx {
        let mut cx = self.clone();
        cx.scope = self.scope.assume(phi);
        cx.entries.push(Entry::Formula);
        cx
    }

    pub fn is_inconsistent(&self) -> bool {
        self.scope.state.is_inconsistent()
    }

    pub fn state(&self) -> &SolverState {
        &self.scope.state
    }

    fn lookup(&self, x: &str) -> Lookup {
        if x == "_" {
            return Lookup::Missing;
        }
        let (mut terms, mut dims) = (0u32, 0u32);
        for e in self.entries.iter().rev() {
            match e {
                Entry::Term { name, ty } => {
                    if name == x {
                        return Lookup::Term(terms, ty.clone());
                    }
                    terms += 1;
                }
                Entry::Dim { name } => {
                    if name == x {
                        return Lookup::Dim(dims);
                    }
                    dims += 1;
                }
                Entry::Formula => {}
            }
        }
        Lookup::Missing
    }

    /// Display names of the bound variables, for printing core terms.
    pub fn names(&self) -> Names {
        let mut names = Names::default();
        for e in &self.entries {
            match e {
                Entry::Term { name, .. } => names.terms.push(name.clone()),
                Entry::Dim { name } => names.dims.push(name.clone()),
                Entry::Formula => {}
            }
        }
        names
    }

    pub fn eval(&self, t: &Term) -> Val {
        eval(&self.scope, &self.env, t)
    }

    pub fn show(&self, t: &Term) -> String {
        pretty::term(t, &self.names())
    }

    pub fn show_type(&self, ty: &Val) -> String {
        self.show(&quote_type(&self.scope, ty))
    }

    pub fn show_value(&self, ty: &Val, v: &Val) -> String {
        self.show(&quote(&self.scope, ty, v))
    }

    /// Names of dimension levels, for rendering solver branches.
    fn dim_names(&self) -> Vec<String> {
        self.names().dims
    }

    /// A semantic formula written with the context's names.
    pub fn show_formula(&self, phi: &Formula) -> String {
        let names = self.dim_names();
        let show = |r: Dim| match r {
            Dim::Zero => "0".to_string(),
            Dim::One => "1".to_string(),
            Dim::Var(l) => names.get(l as usize).cloned().unwrap_or_else(|| format!("#{l}")),
        };
        fn go(phi: &Formula, show: &dyn Fn(Dim) -> String, out: &mut String, nested: bool) {
            match phi {
                Formula::Eq(r, s) => out.push_str(&format!("{} = {}", show(*r), show(*s))),
                Formula::Or(a, b) => {
                    if nested {
                        out.push('(');
                    }
                    go(a, show, out, true);
                    out.push_str(" \\/ ");
                    go(b, show, out, false);
                    if nested {
                        out.push(')');
                    }
                }
            }
        }
        let mut out = String::new();
        go(phi, &show, &mut out, false);
        out
    }

    /// The solver's branches as sets of equations between named
    /// dimensions.
    pub fn branch_table(&self) -> Vec<String> {
        branch_table(self.state(), &self.dim_names())
    }
}

fn branch_table(state: &SolverState, names: &[String]) -> Vec<String> {
    let show = |r: Dim| match r {
        Dim::Zero => "0".to_string(),
        Dim::One => "1".to_string(),
        Dim::Var(l) => names.get(l as usize).cloned().unwrap_or_else(|| format!("#{l}")),
    };
    state
        .branches()
        .iter()
        .map(|b| {
            if b.is_inconsistent() {
                return "{ 0 = 1 }".to_string();
            }
            let eqs: Vec<String> = (0..state.dims() as u32)
                .filter_map(|l| {
                    let rep = b.normalize_dim(Dim::Var(l));
                    (rep != Dim::Var(l)).then(|| format!("{} = {}", show(Dim::Var(l)), show(rep)))
                })
                .collect();
            format!("{{ {} }}", eqs.join(", "))
        })
        .collect()
}

/// A checked top-level definition, inlined at every use.
#[derive(Clone)]
struct Global {
    body: RcTerm,
    value: Val,
    ty: Val,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_splits: usize,
    pub continue_on_error: bool,
    /// Re-elaborate every produced core term from its printed form.
    pub double_check: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            max_splits: DEFAULT_MAX_SPLITS,
            continue_on_error: false,
            double_check: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

/// Outcome of one declaration.
#[derive(Clone, Debug)]
pub struct DeclReport {
    pub name: String,
    pub kind: &'static str,
    pub span: Span,
    pub status: Status,
    pub error: Option<Diagnostic>,
    /// For `#fail`: the diagnostic the inner declaration was rejected with.
    pub rejected_with: Option<Diagnostic>,
    pub branches_split: usize,
    pub elapsed_ms: u128,
    /// Elaborated type and body (definitions and checks).
    pub core: Option<(Term, Term)>,
}

/// A declaration that went through: its core type and term, or for
/// `#fail` the diagnostic its inner declaration was rejected with.
enum Accepted {
    Core((Term, Term)),
    Rejected(Diagnostic),
}

/// Elaborates declarations against a growing environment of definitions.
pub struct Checker {
    pub session: Rc<Session>,
    pub options: Options,
    globals: HashMap<String, Global>,
    order: Vec<String>,
}

impl Checker {
    pub fn new(options: Options) -> Checker {
        Checker {
            session: Session::new(options.max_splits),
            options,
            globals: HashMap::new(),
            order: Vec::new(),
        }
    }

    pub fn empty_ctx(&self) -> Ctx {
        Ctx::empty(self.session.clone())
    }

    /// Names of the accepted definitions, in order.
    pub fn definitions(&self) -> &[String] {
        &self.order
    }

    /// Closed core body, its value and its type.
    pub fn definition(&self, name: &str) -> Option<(RcTerm, Val, Val)> {
        self.globals
            .get(name)
            .map(|g| (g.body.clone(), g.value.clone(), g.ty.clone()))
    }

    // -- contexts ----------------------------------------------------------

    pub fn context(&self, entries: &[CtxEntry]) -> Result<Ctx> {
        let mut cx = self.empty_ctx();
        for e in entries {
            cx = match e {
                CtxEntry::Term(x, ty) => {
                    let ty = self.check_type(&cx, ty)?;
                    let ty = cx.eval(&ty);
                    cx.bind_term(x, ty).0
                }
                CtxEntry::Dim(i, _) => cx.bind_dim(i).0,
                CtxEntry::Formula(phi) => {
                    let (_, sem) = self.formula(&cx, phi)?;
                    cx.assume(&sem)
                }
            };
        }
        Ok(cx)
    }

    fn dim(&self, cx: &Ctx, r: &SDim) -> Result<Dim> {
        match &r.kind {
            SDimKind::Zero => Ok(Dim::Zero),
            SDimKind::One => Ok(Dim::One),
            SDimKind::Var(x) => match cx.lookup(x) {
                Lookup::Dim(ix) => Ok(Dim::Var(ix)),
                Lookup::Term(..) => Err(Diagnostic::new(
                    Code::DimMisuse,
                    r.span,
                    format!("`{x}` is a term variable, not a dimension"),
                )),
                Lookup::Missing => Err(Diagnostic::new(
                    Code::Unbound,
                    r.span,
                    format!("unbound dimension `{x}`"),
                )),
            },
        }
    }

    /// Core (index) and semantic (level) forms of a formula.
    pub fn formula(&self, cx: &Ctx, phi: &SFormula) -> Result<(Formula, Formula)> {
        let core = match &phi.kind {
            SFormulaKind::Eq(r, s) => Formula::eq(self.dim(cx, r)?, self.dim(cx, s)?),
            SFormulaKind::Or(a, b) => self.formula(cx, a)?.0.or(self.formula(cx, b)?.0),
            SFormulaKind::Boundary(r) => Formula::boundary(self.dim(cx, r)?),
        };
        let sem = cx.env.formula(&core);
        Ok((core, sem))
    }

    // -- conversion with diagnostics ----------------------------------------

    fn mismatch_notes(&self, cx: &Ctx, mut d: Diagnostic) -> Diagnostic {
        if let Some(m) = self.session.mismatch.borrow().clone() {
            // Conversion may have gone under binders of its own; name them.
            let mut names = cx.names();
            let own = (names.terms.len(), names.dims.len());
            for k in own.0..m.terms {
                names.terms.push(format!("x{}", k - own.0));
            }
            for k in own.1..m.state.dims() {
                names.dims.push(format!("i{}", k - own.1));
            }
            d = d.note(format!(
                "first disagreement under {}:",
                branch_table(&m.state, &names.dims).join(" or ")
            ));
            d = d.note(format!("  {}", pretty::term(&m.left, &names)));
            d = d.note(format!("  {}", pretty::term(&m.right, &names)));
        }
        d
    }

    fn undecided(&self, span: Span, what: &str) -> Diagnostic {
        Diagnostic::new(
            Code::Undecided,
            span,
            format!(
                "could not decide {what} within {} boundary splits",
                self.session.max_splits
            ),
        )
    }

    fn expect_types(&self, cx: &Ctx, span: Span, expected: &Val, found: &Val) -> Result<()> {
        match conv::check_types(&cx.scope, expected, found) {
            Verdict::Equal => Ok(()),
            Verdict::Undecided => Err(self.undecided(span, "type equality")),
            Verdict::Unequal => Err(self.mismatch_notes(
                cx,
                Diagnostic::new(Code::TypeMismatch, span, "type mismatch")
                    .note(format!("expected: {}", cx.show_type(expected)))
                    .note(format!("found:    {}", cx.show_type(found))),
            )),
        }
    }

    fn expect_values(&self, cx: &Ctx, span: Span, code: Code, what: &str, ty: &Val, a: &Val, b: &Val) -> Result<()> {
        match conv::check_values(&cx.scope, ty, a, b) {
            Verdict::Equal => Ok(()),
            Verdict::Undecided => Err(self.undecided(span, what)),
            Verdict::Unequal => Err(self.mismatch_notes(
                cx,
                Diagnostic::new(code, span, what.to_string())
                    .note(format!("expected: {}", cx.show_value(ty, a)))
                    .note(format!("found:    {}", cx.show_value(ty, b))),
            )),
        }
    }

    // -- types ---------------------------------------------------------------

    pub fn check_type(&self, cx: &Ctx, e: &Expr) -> Result<Term> {
        match &e.kind {
            ExprKind::Univ => Ok(Term::Univ),
            ExprKind::Bool => Ok(Term::Bool),
            ExprKind::Pi(tele, body) | ExprKind::Sg(tele, body) => {
                let is_pi = matches!(e.kind, ExprKind::Pi(..));
                self.binder_type(cx, tele, body, &|x, a, b| {
                    if is_pi {
                        Term::Pi(x, a, b)
                    } else {
                        Term::Sg(x, a, b)
                    }
                }, false)
            }
            ExprKind::Path { line, left, right } => {
                let (cxi, _) = cx.bind_dim(&line.0);
                let a = self.check_type(&cxi, &line.1)?;
                let line_v = DimClosure::Term {
                    name: Name::new(&line.0),
                    env: cx.env.clone(),
                    body: rc(a.clone()),
                };
                let l = self.check(cx, left, &line_v.apply(&cx.scope, Dim::Zero))?;
                let r = self.check(cx, right, &line_v.apply(&cx.scope, Dim::One))?;
                Ok(Term::Path {
                    line: (Name::new(&line.0), rc(a)),
                    left: rc(l),
                    right: rc(r),
                })
            }
            ExprKind::El(c) => {
                let c = self.check(cx, c, &univ())?;
                Ok(Term::El(rc(c)))
            }
            _ => {
                let (c, ty) = self.infer(cx, e)?;
                match &*whnf(&cx.scope, &ty) {
                    Value::Univ => Ok(Term::El(rc(c))),
                    _ if cx.is_inconsistent() => Ok(Term::Abort),
                    _ => Err(Diagnostic::new(
                        Code::ExpectedCode,
                        e.span,
                        format!("expected a type or a code in U, found a term of type {}", cx.show_type(&ty)),
                    )),
                }
            }
        }
    }

    /// Elaborates `(x : A) … -> B` style telescopes with `elab` for each
    /// component (types or codes).
    fn binder_type(
        &self,
        cx: &Ctx,
        tele: &[(String, Expr)],
        body: &Expr,
        build: &dyn Fn(Name, RcTerm, RcTerm) -> Term,
        is_code: bool,
    ) -> Result<Term> {
        let elab = |cx: &Ctx, e: &Expr| {
            if is_code {
                self.check(cx, e, &univ())
            } else {
                self.check_type(cx, e)
            }
        };
        let Some(((x, a), rest)) = tele.split_first() else {
            return elab(cx, body);
        };
        let a_t = elab(cx, a)?;
        let a_ty = self.decode(cx, &a_t, is_code);
        let (cx1, _) = cx.bind_term(x, a_ty);
        let b_t = self.binder_type(&cx1, rest, body, build, is_code)?;
        Ok(build(Name::new(x), rc(a_t), rc(b_t)))
    }

    /// The type of a binder's variable: the type itself, or the decoding of
    /// a code.
    fn decode(&self, cx: &Ctx, t: &Term, is_code: bool) -> Val {
        let v = cx.eval(t);
        if is_code {
            do_el(&cx.scope, &v)
        } else {
            v
        }
    }

    // -- codes -----------------------------------------------------------------

    /// Type-former syntax read as a code.
    fn code(&self, cx: &Ctx, e: &Expr) -> Result<Option<Term>> {
        let t = match &e.kind {
            ExprKind::Univ => {
                return Err(Diagnostic::new(
                    Code::NotATerm,
                    e.span,
                    "U is a type without a code; it has no type of its own",
                ))
            }
            ExprKind::Bool | ExprKind::CodeBool => Term::CodeBool,
            ExprKind::Pi(tele, body) | ExprKind::Sg(tele, body) => {
                let is_pi = matches!(e.kind, ExprKind::Pi(..));
                self.binder_type(cx, tele, body, &|x, a, b| {
                    if is_pi {
                        Term::CodePi(x, a, b)
                    } else {
                        Term::CodeSg(x, a, b)
                    }
                }, true)?
            }
            ExprKind::CodePi(a, (x, b)) | ExprKind::CodeSg(a, (x, b)) => {
                let a_t = self.check(cx, a, &univ())?;
                let (cx1, _) = cx.bind_term(x, el(&cx.eval(&a_t)));
                let b_t = self.check(&cx1, b, &univ())?;
                if matches!(e.kind, ExprKind::CodePi(..)) {
                    Term::CodePi(Name::new(x), rc(a_t), rc(b_t))
                } else {
                    Term::CodeSg(Name::new(x), rc(a_t), rc(b_t))
                }
            }
            ExprKind::Path { line, left, right } | ExprKind::CodePath { line, left, right } => {
                let (cxi, _) = cx.bind_dim(&line.0);
                let a = self.check(&cxi, &line.1, &univ())?;
                let line_v = DimClosure::Term {
                    name: Name::new(&line.0),
                    env: cx.env.clone(),
                    body: rc(a.clone()),
                };
                let l = self.check(cx, left, &el(&line_v.apply(&cx.scope, Dim::Zero)))?;
                let r = self.check(cx, right, &el(&line_v.apply(&cx.scope, Dim::One)))?;
                Term::CodePath {
                    line: (Name::new(&line.0), rc(a)),
                    left: rc(l),
                    right: rc(r),
                }
            }
            // The code of `El c` is `c`.
            ExprKind::El(c) => self.check(cx, c, &univ())?,
            _ => return Ok(None),
        };
        Ok(Some(t))
    }

    // -- checking ----------------------------------------------------------------

    pub fn check(&self, cx: &Ctx, e: &Expr, ty: &Val) -> Result<Term> {
        if cx.is_inconsistent() {
            // Every type is trivial here; the only element is `abort`.
            return Ok(Term::Abort);
        }
        let ty = whnf(&cx.scope, ty);
        match &e.kind {
            ExprKind::Lam(xs, body) => {
                let Some((dom, cod)) = unfold_pi(&cx.scope, &ty) else {
                    return Err(self.intro_mismatch(cx, e, "a λ-abstraction", &ty));
                };
                let (cx1, x) = cx.bind_term(&xs[0], dom);
                let rest = if xs.len() > 1 {
                    Expr {
                        kind: ExprKind::Lam(xs[1..].to_vec(), body.clone()),
                        span: e.span,
                    }
                } else {
                    (**body).clone()
                };
                let b = self.check(&cx1, &rest, &cod.apply(&cx1.scope, x))?;
                Ok(Term::Lam(Name::new(&xs[0]), rc(b)))
            }
            ExprKind::Pair(a, b) => {
                let Some((dom, cod)) = unfold_sg(&cx.scope, &ty) else {
                    return Err(self.intro_mismatch(cx, e, "a pair", &ty));
                };
                let a_t = self.check(cx, a, &dom)?;
                let b_t = self.check(cx, b, &cod.apply(&cx.scope, cx.eval(&a_t)))?;
                Ok(Term::Pair(rc(a_t), rc(b_t)))
            }
            ExprKind::DLam(is, body) => {
                let Some((line, a0, a1)) = unfold_path(&cx.scope, &ty) else {
                    return Err(self.intro_mismatch(cx, e, "a path abstraction", &ty));
                };
                let (cx1, i) = cx.bind_dim(&is[0]);
                let rest = if is.len() > 1 {
                    Expr {
                        kind: ExprKind::DLam(is[1..].to_vec(), body.clone()),
                        span: e.span,
                    }
                } else {
                    (**body).clone()
                };
                let b = self.check(&cx1, &rest, &line.apply(&cx1.scope, i))?;
                let t = Term::DLam(Name::new(&is[0]), rc(b));
                self.check_endpoints(cx, e.span, &t, &line, &a0, &a1)?;
                Ok(t)
            }
            ExprKind::Refl => {
                let Some((line, a0, a1)) = unfold_path(&cx.scope, &ty) else {
                    return Err(self.intro_mismatch(cx, e, "refl", &ty));
                };
                let (cx1, _) = cx.bind_dim("_");
                let body = quote(&cx1.scope, &line.apply(&cx1.scope, Dim::Zero), &a0);
                let t = Term::DLam(Name::anon(), rc(body));
                self.check_endpoints(cx, e.span, &t, &line, &a0, &a1)?;
                Ok(t)
            }
            ExprKind::Split(branches) => self.check_split(cx, e.span, branches, &ty),
            ExprKind::Abort => Err(Diagnostic::new(
                Code::AbortInConsistent,
                e.span,
                "abort outside an inconsistent context",
            )
            .note(format!("assumptions: {}", cx.branch_table().join(" or ")))),
            ExprKind::Univ
            | ExprKind::Bool
            | ExprKind::Pi(..)
            | ExprKind::Sg(..)
            | ExprKind::Path { .. }
            | ExprKind::El(_)
                if !matches!(&*ty, Value::Univ) =>
            {
                Err(Diagnostic::new(
                    Code::NotATerm,
                    e.span,
                    format!("a type is not an element of {}", cx.show_type(&ty)),
                ))
            }
            _ => {
                if let Value::Univ = &*ty {
                    if let Some(t) = self.code(cx, e)? {
                        return Ok(t);
                    }
                }
                if let Some(r) = self.check_redex(cx, e, &ty) {
                    return r;
                }
                let (t, found) = self.infer(cx, e)?;
                self.expect_types(cx, e.span, &ty, &found)?;
                Ok(t)
            }
        }
    }

    fn intro_mismatch(&self, cx: &Ctx, e: &Expr, what: &str, ty: &Val) -> Diagnostic {
        Diagnostic::new(
            Code::TypeMismatch,
            e.span,
            format!("{what} cannot have type {}", cx.show_type(ty)),
        )
    }

    /// The path `t` must agree with the type's endpoints.
    fn check_endpoints(&self, cx: &Ctx, span: Span, t: &Term, line: &DimClosure, a0: &Val, a1: &Val) -> Result<()> {
        let p = cx.eval(t);
        for (end, expected) in [(Dim::Zero, a0), (Dim::One, a1)] {
            let found = do_dapp(&cx.scope, &p, end);
            let ty = line.apply(&cx.scope, end);
            let which = if end == Dim::Zero { "left" } else { "right" };
            self.expect_values(
                cx,
                span,
                Code::BoundaryMismatch,
                &format!("the path's {which} endpoint does not match its type"),
                &ty,
                expected,
                &found,
            )?;
        }
        Ok(())
    }

    fn check_split(&self, cx: &Ctx, span: Span, branches: &[(SFormula, Expr)], ty: &Val) -> Result<Term> {
        let mut formulas = Vec::new();
        for (phi, _) in branches {
            formulas.push(self.formula(cx, phi)?);
        }
        let cover = Formula::disjunction(formulas.iter().map(|f| f.1.clone()).collect()).expect("non-empty split");
        if !cx.scope.entails(&cover) {
            return Err(Diagnostic::new(
                Code::UncoveredSplit,
                span,
                format!("the branches do not cover the context: {} is not entailed", cx.show_formula(&cover)),
            )
            .note(format!("assumptions: {}", cx.branch_table().join(" or "))));
        }
        let mut bodies = Vec::new();
        for ((_, sem), (_, e)) in formulas.iter().zip(branches) {
            bodies.push(self.check(&cx.assume(sem), e, ty)?);
        }
        for k in 0..branches.len() {
            for l in k + 1..branches.len() {
                let both = cx.assume(&formulas[k].1).assume(&formulas[l].1);
                if both.is_inconsistent() {
                    continue;
                }
                let (a, b) = (both.eval(&bodies[k]), both.eval(&bodies[l]));
                self.expect_values(
                    &both,
                    branches[l].1.span,
                    Code::OverlapDisagreement,
                    &format!(
                        "branches `{}` and `{}` disagree where both hold",
                        cx.show_formula(&formulas[k].1),
                        cx.show_formula(&formulas[l].1)
                    ),
                    ty,
                    &a,
                    &b,
                )?;
            }
        }
        // Left-nested binary splits.
        let mut pieces = formulas.into_iter().map(|f| f.0).zip(bodies);
        let (phi0, t0) = pieces.next().expect("non-empty split");
        let mut acc_phi = phi0.clone();
        let mut acc = Term::Split(vec![(phi0, rc(t0))]);
        let mut first = true;
        for (phi, t) in pieces {
            let left = if first {
                match acc {
                    Term::Split(mut bs) => bs.pop().expect("one branch").1,
                    _ => unreachable!(),
                }
            } else {
                rc(acc)
            };
            acc = Term::Split(vec![(acc_phi.clone(), left), (phi.clone(), rc(t))]);
            acc_phi = acc_phi.or(phi);
            first = false;
        }
        Ok(acc)
    }

    // -- inference -------------------------------------------------------------

    pub fn infer(&self, cx: &Ctx, e: &Expr) -> Result<(Term, Val)> {
        match &e.kind {
            ExprKind::Var(x) => match cx.lookup(x) {
                Lookup::Term(ix, ty) => Ok((Term::Var(ix), ty)),
                Lookup::Dim(_) => Err(Diagnostic::new(
                    Code::DimMisuse,
                    e.span,
                    format!("dimension `{x}` used as a term"),
                )),
                Lookup::Missing => match self.globals.get(x) {
                    Some(g) => Ok(((*g.body).clone(), g.ty.clone())),
                    None => Err(Diagnostic::new(Code::Unbound, e.span, format!("unbound variable `{x}`"))),
                },
            },
            ExprKind::DimLit(_) => Err(Diagnostic::new(
                Code::DimMisuse,
                e.span,
                "a dimension constant used as a term",
            )),
            ExprKind::Tt => Ok((Term::Tt, Rc::new(Value::Bool))),
            ExprKind::Ff => Ok((Term::Ff, Rc::new(Value::Bool))),
            ExprKind::App(f, a) if self.is_dim_arg(cx, a) => {
                let r = self.dim(cx, &as_dim(a))?;
                self.infer_dapp(cx, e, f, r)
            }
            ExprKind::App(f, a) => {
                if let Some((head, args)) = redex_spine(e) {
                    return self.infer_redex(cx, head, &args);
                }
                let (f_t, f_ty) = self.infer(cx, f)?;
                let Some((dom, cod)) = unfold_pi(&cx.scope, &f_ty) else {
                    return Err(Diagnostic::new(
                        Code::ExpectedFunction,
                        f.span,
                        format!("expected function type, found {}", cx.show_type(&f_ty)),
                    ));
                };
                let a_t = self.check(cx, a, &dom)?;
                let ty = cod.apply(&cx.scope, cx.eval(&a_t));
                Ok((Term::App(rc(f_t), rc(a_t)), ty))
            }
            ExprKind::DApp(p, r) => {
                let r = self.dim(cx, r)?;
                self.infer_dapp(cx, e, p, r)
            }
            ExprKind::Fst(p) | ExprKind::Snd(p) => {
                let (p_t, p_ty) = self.infer(cx, p)?;
                let Some((dom, cod)) = unfold_sg(&cx.scope, &p_ty) else {
                    return Err(Diagnostic::new(
                        Code::ExpectedPair,
                        p.span,
                        format!("expected a pair type, found {}", cx.show_type(&p_ty)),
                    ));
                };
                if matches!(e.kind, ExprKind::Fst(_)) {
                    Ok((Term::Fst(rc(p_t)), dom))
                } else {
                    let fst = do_fst(&cx.scope, &cx.eval(&p_t));
                    Ok((Term::Snd(rc(p_t)), cod.apply(&cx.scope, fst)))
                }
            }
            ExprKind::If {
                motive,
                scrut,
                tt,
                ff,
            } => {
                let scrut_t = self.check(cx, scrut, &Rc::new(Value::Bool))?;
                let (cx1, _) = cx.bind_term(&motive.0, Rc::new(Value::Bool));
                let c = self.check_type(&cx1, &motive.1)?;
                let mot = Closure::Term {
                    name: Name::new(&motive.0),
                    env: cx.env.clone(),
                    body: rc(c.clone()),
                };
                let tt_t = self.check(cx, tt, &mot.apply(&cx.scope, Rc::new(Value::Tt)))?;
                let ff_t = self.check(cx, ff, &mot.apply(&cx.scope, Rc::new(Value::Ff)))?;
                let ty = mot.apply(&cx.scope, cx.eval(&scrut_t));
                Ok((
                    Term::If {
                        motive: (Name::new(&motive.0), rc(c)),
                        scrut: rc(scrut_t),
                        tt: rc(tt_t),
                        ff: rc(ff_t),
                    },
                    ty,
                ))
            }
            ExprKind::Coe { from, to, line, arg } => {
                let (r, r2) = (self.dim(cx, from)?, self.dim(cx, to)?);
                let (cxi, _) = cx.bind_dim(&line.0);
                let a = self.check(&cxi, &line.1, &univ())?;
                let line_v = DimClosure::Term {
                    name: Name::new(&line.0),
                    env: cx.env.clone(),
                    body: rc(a.clone()),
                };
                let arg_t = self.check(cx, arg, &el(&line_v.apply(&cx.scope, cx.env.dim(r))))?;
                let ty = el(&line_v.apply(&cx.scope, cx.env.dim(r2)));
                Ok((
                    Term::Coe {
                        from: r,
                        to: r2,
                        line: (Name::new(&line.0), rc(a)),
                        arg: rc(arg_t),
                    },
                    ty,
                ))
            }
            ExprKind::Com {
                from,
                to,
                wall,
                line,
                tube,
            } => {
                let (cxi, _) = cx.bind_dim(&line.0);
                let a = self.check(&cxi, &line.1, &univ())?;
                self.infer_com(cx, from, to, wall, (Name::new(&line.0), a), tube)
            }
            ExprKind::Hcom {
                from,
                to,
                wall,
                code,
                tube,
            } => {
                let a = self.check(cx, code, &univ())?;
                let a = shift(&a, 0, 0, 1, 0);
                self.infer_com(cx, from, to, wall, (Name::anon(), a), tube)
            }
            ExprKind::TypeCase {
                motive,
                scrut,
                pi,
                sg,
                path,
                bool,
            } => self.infer_typecase(cx, motive, scrut, pi, sg, path, bool),
            ExprKind::Ann(term, ty) => {
                let ty_t = self.check_type(cx, ty)?;
                let ty_v = cx.eval(&ty_t);
                let t = self.check(cx, term, &ty_v)?;
                Ok((t, ty_v))
            }
            ExprKind::Univ => Err(Diagnostic::new(
                Code::NotATerm,
                e.span,
                "U is a type without a code; it has no type of its own",
            )),
            ExprKind::Bool
            | ExprKind::CodeBool
            | ExprKind::Pi(..)
            | ExprKind::Sg(..)
            | ExprKind::Path { .. }
            | ExprKind::CodePi(..)
            | ExprKind::CodeSg(..)
            | ExprKind::CodePath { .. }
            | ExprKind::El(_) => {
                let t = self.code(cx, e)?.expect("type-former syntax");
                Ok((t, univ()))
            }
            ExprKind::DLam(is, body) => {
                // A path abstraction whose body infers gets the line of its
                // body between the body's own endpoints.
                let (cx1, _) = cx.bind_dim(&is[0]);
                let rest = if is.len() > 1 {
                    Expr {
                        kind: ExprKind::DLam(is[1..].to_vec(), body.clone()),
                        span: e.span,
                    }
                } else {
                    (**body).clone()
                };
                let (b, b_ty) = self.infer(&cx1, &rest)?;
                let line = quote_type(&cx1.scope, &b_ty);
                let t = Term::DLam(Name::new(&is[0]), rc(b));
                let line_v = DimClosure::Term {
                    name: Name::new(&is[0]),
                    env: cx.env.clone(),
                    body: rc(line.clone()),
                };
                let endpoint = |r: Dim| {
                    let ty = line_v.apply(&cx.scope, r);
                    quote(&cx.scope, &ty, &cx.eval(&Term::DApp(rc(t.clone()), r)))
                };
                let path = Term::Path {
                    left: rc(endpoint(Dim::Zero)),
                    right: rc(endpoint(Dim::One)),
                    line: (Name::new(&is[0]), rc(line.clone())),
                };
                Ok((t, cx.eval(&path)))
            }
            // A pair of inferable components gets the non-dependent Σ, which
            // is enough for printed projections out of literal pairs.
            ExprKind::Pair(a, b) => {
                let (a_t, a_ty) = self.infer(cx, a)?;
                let (b_t, b_ty) = self.infer(cx, b)?;
                let sg = Term::Sg(
                    Name::anon(),
                    rc(quote_type(&cx.scope, &a_ty)),
                    rc(shift(&quote_type(&cx.scope, &b_ty), 1, 0, 0, 0)),
                );
                Ok((Term::Pair(rc(a_t), rc(b_t)), cx.eval(&sg)))
            }
            ExprKind::Lam(..) | ExprKind::Refl | ExprKind::Split(_) | ExprKind::Abort => {
                Err(Diagnostic::new(
                    Code::CannotInfer,
                    e.span,
                    "cannot infer a type for this term; add an annotation `(e : A)`",
                ))
            }
        }
    }

    fn is_dim_arg(&self, cx: &Ctx, a: &Expr) -> bool {
        match &a.kind {
            ExprKind::DimLit(_) => true,
            ExprKind::Var(x) => matches!(cx.lookup(x), Lookup::Dim(_)),
            _ => false,
        }
    }

    fn infer_dapp(&self, cx: &Ctx, e: &Expr, p: &Expr, r: Dim) -> Result<(Term, Val)> {
        let (p_t, p_ty) = self.infer(cx, p)?;
        let Some((line, _, _)) = unfold_path(&cx.scope, &p_ty) else {
            return Err(Diagnostic::new(
                Code::ExpectedPath,
                e.span,
                format!("expected a path type, found {}", cx.show_type(&p_ty)),
            ));
        };
        let ty = line.apply(&cx.scope, cx.env.dim(r));
        Ok((Term::DApp(rc(p_t), r), ty))
    }

    /// Peels `(λx y…. b) a1 a2 …`: each binder is defined as its argument,
    /// inferred in the outer context. Returns the inner context, the binders
    /// with their arguments' core, the residual body and the unused
    /// arguments.
    fn define_redex<'e>(
        &self,
        cx: &Ctx,
        lam: &Expr,
        args: &[&'e Expr],
    ) -> Result<(Ctx, Vec<(Name, Term)>, Expr, Vec<&'e Expr>)> {
        let ExprKind::Lam(xs, b) = &lam.kind else { unreachable!() };
        let (mut xs, mut b): (&[String], &Expr) = (xs, b);
        let mut inner = cx.clone();
        let mut binders = Vec::new();
        let mut pending = args;
        while let Some((a, rest)) = pending.split_first() {
            if xs.is_empty() {
                match &b.kind {
                    ExprKind::Lam(ys, c) => (xs, b) = (ys, c),
                    _ => break,
                }
            }
            let (a_t, a_ty) = self.infer(cx, a)?;
            inner = inner.define(&xs[0], a_ty, cx.eval(&a_t));
            binders.push((Name::new(&xs[0]), a_t));
            xs = &xs[1..];
            pending = rest;
        }
        let residual = if xs.is_empty() {
            b.clone()
        } else {
            Expr {
                kind: ExprKind::Lam(xs.to_vec(), Box::new(b.clone())),
                span: lam.span,
            }
        };
        Ok((inner, binders, residual, pending.to_vec()))
    }

    fn close_redex(binders: Vec<(Name, Term)>, body: Term) -> Term {
        let mut t = binders
            .iter()
            .rev()
            .fold(body, |t, (x, _)| Term::Lam(x.clone(), rc(t)));
        for (_, a_t) in binders {
            t = Term::App(rc(t), rc(a_t));
        }
        t
    }

    /// `(λx y…. b) a1 a2 …` without annotations; arguments beyond the
    /// binders are applied as usual.
    fn infer_redex(&self, cx: &Ctx, lam: &Expr, args: &[&Expr]) -> Result<(Term, Val)> {
        let (inner, binders, residual, pending) = self.define_redex(cx, lam, args)?;
        let (body_t, mut ty) = self.infer(&inner, &residual)?;
        let mut t = Self::close_redex(binders, body_t);
        for a in pending {
            let Some((dom, cod)) = unfold_pi(&cx.scope, &ty) else {
                return Err(Diagnostic::new(
                    Code::ExpectedFunction,
                    lam.span,
                    format!("expected function type, found {}", cx.show_type(&ty)),
                ));
            };
            let a_t = self.check(cx, a, &dom)?;
            ty = cod.apply(&cx.scope, cx.eval(&a_t));
            t = Term::App(rc(t), rc(a_t));
        }
        Ok((t, ty))
    }

    /// The checking counterpart: when every argument meets a binder, the
    /// residual body is checked against the expected type.
    fn check_redex(&self, cx: &Ctx, e: &Expr, ty: &Val) -> Option<Result<Term>> {
        let (head, args) = redex_spine(e)?;
        let (inner, binders, residual, pending) = match self.define_redex(cx, head, &args) {
            Ok(r) => r,
            Err(d) => return Some(Err(d)),
        };
        if !pending.is_empty() {
            return None;
        }
        Some(self.check(&inner, &residual, ty).map(|b| Self::close_redex(binders, b)))
    }

    fn infer_com(
        &self,
        cx: &Ctx,
        from: &SDim,
        to: &SDim,
        wall: &SDim,
        line: (Name, Term),
        tube: &Bound,
    ) -> Result<(Term, Val)> {
        let (r, r2, s) = (self.dim(cx, from)?, self.dim(cx, to)?, self.dim(cx, wall)?);
        let line_v = DimClosure::Term {
            name: line.0.clone(),
            env: cx.env.clone(),
            body: rc(line.1.clone()),
        };
        let (cxk, k) = cx.bind_dim(&tube.0);
        let (sr, ss) = (cxk.env.dim(shift_dim(r)), cxk.env.dim(shift_dim(s)));
        let domain = Formula::eq(k, sr).or(Formula::boundary(ss));
        let cx_tube = cxk.assume(&domain);
        let tube_t = self.check(&cx_tube, &tube.1, &el(&line_v.apply(&cx_tube.scope, k)))?;
        let ty = el(&line_v.apply(&cx.scope, cx.env.dim(r2)));
        Ok((
            Term::Com {
                from: r,
                to: r2,
                wall: s,
                line: (line.0, rc(line.1)),
                tube: (Name::new(&tube.0), rc(tube_t)),
            },
            ty,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn infer_typecase(
        &self,
        cx: &Ctx,
        motive: &Bound,
        scrut: &Expr,
        pi: &([String; 2], Box<Expr>),
        sg: &([String; 2], Box<Expr>),
        path: &([String; 5], Box<Expr>),
        bool: &Expr,
    ) -> Result<(Term, Val)> {
        let scrut_t = self.check(cx, scrut, &univ())?;
        let (cx1, _) = cx.bind_term(&motive.0, univ());
        let c = self.check_type(&cx1, &motive.1)?;
        let mot = Closure::Term {
            name: Name::new(&motive.0),
            env: cx.env.clone(),
            body: rc(c.clone()),
        };
        let fun_branch = |names: &[String; 2], body: &Expr, sigma: bool| -> Result<Term> {
            let (cxa, a) = cx.bind_term(&names[0], univ());
            let fam_ty = Rc::new(Value::Pi(el(&a), Closure::host("_", |_, _| univ())));
            let (cxb, b) = cxa.bind_term(&names[1], fam_ty);
            let fam = Closure::host("x", move |sc, x| do_app(sc, &b, &x));
            let code = if sigma {
                Rc::new(Value::CodeSg(a, fam))
            } else {
                Rc::new(Value::CodePi(a, fam))
            };
            self.check(&cxb, body, &mot.apply(&cxb.scope, code))
        };
        let pi_t = fun_branch(&pi.0, &pi.1, false)?;
        let sg_t = fun_branch(&sg.0, &sg.1, true)?;
        let path_t = {
            let n = &path.0;
            let (c0, u0) = cx.bind_term(&n[0], univ());
            let (c1, u1) = c0.bind_term(&n[1], univ());
            let line_ty = Rc::new(Value::Path(DimClosure::constant(univ()), u0.clone(), u1.clone()));
            let (c2, up) = c1.bind_term(&n[2], line_ty);
            let (c3, x0) = c2.bind_term(&n[3], el(&u0));
            let (c4, x1) = c3.bind_term(&n[4], el(&u1));
            let line = DimClosure::host("i", move |sc, i| do_dapp(sc, &up, i));
            let code = Rc::new(Value::CodePath(line, x0, x1));
            self.check(&c4, &path.1, &mot.apply(&c4.scope, code))?
        };
        let bool_t = self.check(cx, bool, &mot.apply(&cx.scope, Rc::new(Value::CodeBool)))?;
        let ty = mot.apply(&cx.scope, cx.eval(&scrut_t));
        let names = |ns: &[String]| ns.iter().map(|x| Name::new(x)).collect::<Vec<_>>();
        let n2 = |ns: &[String; 2]| {
            let v = names(ns);
            [v[0].clone(), v[1].clone()]
        };
        Ok((
            Term::TypeCase {
                motive: (Name::new(&motive.0), rc(c)),
                scrut: rc(scrut_t),
                pi: (n2(&pi.0), rc(pi_t)),
                sg: (n2(&sg.0), rc(sg_t)),
                path: (std::array::from_fn(|k| Name::new(&path.0[k])), rc(path_t)),
                bool: rc(bool_t),
            },
            ty,
        ))
    }

    // -- declarations ------------------------------------------------------------

    fn ensure_fresh(&self, name: &str, span: Span) -> Result<()> {
        if self.globals.contains_key(name) {
            return Err(Diagnostic::new(
                Code::Duplicate,
                span,
                format!("`{name}` is already defined"),
            ));
        }
        Ok(())
    }

    /// Elaborates a closed term against a closed type, with the double check
    /// when enabled. Returns the core type, term and their values.
    fn elaborate_closed(&self, term: &Expr, ty: &Expr) -> Result<(Term, Term, Val)> {
        let cx = self.empty_ctx();
        let ty_t = self.check_type(&cx, ty)?;
        let ty_v = cx.eval(&ty_t);
        let t = self.check(&cx, term, &ty_v)?;
        if self.options.double_check {
            self.double_check(&cx, term.span, &ty_t, &t)?;
        }
        Ok((ty_t, t, ty_v))
    }

    /// Re-elaborates the printed forms of a type and term and requires the
    /// same core terms back.
    pub fn double_check(&self, cx: &Ctx, span: Span, ty: &Term, t: &Term) -> Result<()> {
        let fault = |what: &str, detail: String| {
            Diagnostic::new(Code::TypeMismatch, span, format!("double check failed: {what}")).note(detail)
        };
        let ty_src = cx.show(ty);
        let ty_e = parse_expr(&ty_src).map_err(|d| fault("printed type does not parse", format!("{ty_src}: {d}")))?;
        let ty2 = self
            .check_type(cx, &ty_e)
            .map_err(|d| fault("printed type does not elaborate", format!("{ty_src}: {d}")))?;
        if !alpha_equal(ty, &ty2) {
            return Err(fault("type changed on re-elaboration", ty_src));
        }
        let src = cx.show(t);
        let e = parse_expr(&src).map_err(|d| fault("printed term does not parse", format!("{src}: {d}")))?;
        let t2 = self
            .check(cx, &e, &cx.eval(ty))
            .map_err(|d| fault("printed term does not re-check", format!("{src}: {d}")))?;
        if !alpha_equal(t, &t2) {
            return Err(fault("term changed on re-elaboration", src));
        }
        Ok(())
    }

    /// Runs one declaration, adding definitions to the environment.
    fn declaration(&mut self, d: &Decl) -> Result<Accepted> {
        match &d.kind {
            DeclKind::Def { name, ty, body } => {
                self.ensure_fresh(name, d.span)?;
                let (ty_t, t, ty_v) = self.elaborate_closed(body, ty)?;
                let sc = Scope::new(self.session.clone());
                let value = eval(&sc, &Env::default(), &t);
                self.globals.insert(
                    name.clone(),
                    Global {
                        body: rc(t.clone()),
                        value,
                        ty: ty_v,
                    },
                );
                self.order.push(name.clone());
                Ok(Accepted::Core((ty_t, t)))
            }
            DeclKind::Check { term, ty } => {
                let (ty_t, t, _) = self.elaborate_closed(term, ty)?;
                Ok(Accepted::Core((ty_t, t)))
            }
            DeclKind::Normalize { term, ty, expect } => {
                let (ty_t, t, ty_v) = self.elaborate_closed(term, ty)?;
                let cx = self.empty_ctx();
                let expected = self.check(&cx, expect, &ty_v)?;
                let (v, w) = (cx.eval(&t), cx.eval(&expected));
                let (nf, nf_expected) = (quote(&cx.scope, &ty_v, &v), quote(&cx.scope, &ty_v, &w));
                if alpha_equal(&nf, &nf_expected) {
                    return Ok(Accepted::Core((ty_t, nf)));
                }
                // Normal forms need not be unique under boundary separation,
                // so fall back to conversion.
                match conv::check_values(&cx.scope, &ty_v, &w, &v) {
                    Verdict::Equal => Ok(Accepted::Core((ty_t, nf))),
                    Verdict::Undecided => Err(self.undecided(d.span, "the expected normal form")),
                    Verdict::Unequal => Err(self.mismatch_notes(
                        &cx,
                        Diagnostic::new(Code::NormalizeMismatch, d.span, "normal form differs from the expectation")
                            .note(format!("normal form: {}", cx.show(&nf)))
                            .note(format!("expected:    {}", cx.show(&nf_expected))),
                    )),
                }
            }
            DeclKind::Fail(inner) => {
                // Elaborate in a scratch copy so nothing leaks.
                let mut scratch = Checker {
                    session: self.session.clone(),
                    options: self.options.clone(),
                    globals: self.globals.clone(),
                    order: self.order.clone(),
                };
                match scratch.declaration(inner) {
                    Ok(_) => Err(Diagnostic::new(
                        Code::UnexpectedSuccess,
                        d.span,
                        "declaration was expected to fail but was accepted",
                    )),
                    Err(e) => Ok(Accepted::Rejected(e)),
                }
            }
        }
    }

    /// Checks a list of declarations; stops at the first failure unless
    /// configured to continue.
    pub fn check_declarations(&mut self, decls: &[Decl]) -> Vec<DeclReport> {
        let mut reports = Vec::new();
        for d in decls {
            self.session.memo.borrow_mut().clear();
            self.session.reset_diagnostics();
            self.session.splits_taken.set(0);
            let started = Instant::now();
            let outcome = self.declaration(d);
            let mut report = DeclReport {
                name: d.name(),
                kind: d.kind_str(),
                span: d.span,
                status: Status::Ok,
                error: None,
                rejected_with: None,
                branches_split: self.session.splits_taken.get(),
                elapsed_ms: started.elapsed().as_millis(),
                core: None,
            };
            match outcome {
                Ok(Accepted::Core(core)) => report.core = Some(core),
                Ok(Accepted::Rejected(e)) => report.rejected_with = Some(e),
                Err(e) => {
                    report.status = Status::Failed;
                    report.error = Some(e);
                }
            }
            let failed = report.status == Status::Failed;
            reports.push(report);
            if failed && !self.options.continue_on_error {
                break;
            }
        }
        reports
    }

    /// Parses and checks a whole file.
    pub fn check_source(&mut self, src: &str) -> Result<Vec<DeclReport>> {
        let decls = parse_file(src)?;
        Ok(self.check_declarations(&decls))
    }

    /// Elaborates `term : ty` in a context and returns its normal form.
    pub fn normalize(&self, cx: &Ctx, term: &Expr, ty: &Expr) -> Result<Term> {
        let ty_t = self.check_type(cx, ty)?;
        let ty_v = cx.eval(&ty_t);
        let t = self.check(cx, term, &ty_v)?;
        Ok(quote(&cx.scope, &ty_v, &cx.eval(&t)))
    }

    /// Decides `A ≡ B` between types in a context.
    pub fn convertible_types(&self, cx: &Ctx, a: &Expr, b: &Expr) -> Result<Verdict> {
        let a_t = self.check_type(cx, a)?;
        let b_t = self.check_type(cx, b)?;
        Ok(conv::check_types(&cx.scope, &cx.eval(&a_t), &cx.eval(&b_t)))
    }

    /// Decides `a ≡ b : ty` in a context.
    pub fn convertible(&self, cx: &Ctx, ty: &Expr, a: &Expr, b: &Expr) -> Result<Verdict> {
        let ty_t = self.check_type(cx, ty)?;
        let ty_v = cx.eval(&ty_t);
        let a_t = self.check(cx, a, &ty_v)?;
        let b_t = self.check(cx, b, &ty_v)?;
        Ok(conv::check_values(&cx.scope, &ty_v, &cx.eval(&a_t), &cx.eval(&b_t)))
    }
}

/// `(λ…. b) a1 … an` as its λ head and arguments.
fn redex_spine(e: &Expr) -> Option<(&Expr, Vec<&Expr>)> {
    let mut args = Vec::new();
    let mut head = e;
    while let ExprKind::App(g, x) = &head.kind {
        args.push(&**x);
        head = &**g;
    }
    if args.is_empty() || !matches!(head.kind, ExprKind::Lam(..)) {
        return None;
    }
    args.reverse();
    Some((head, args))
}

fn shift_dim(r: Dim) -> Dim {
    match r {
        Dim::Var(ix) => Dim::Var(ix + 1),
        c => c,
    }
}

fn as_dim(e: &Expr) -> SDim {
    let kind = match &e.kind {
        ExprKind::DimLit(false) => SDimKind::Zero,
        ExprKind::DimLit(true) => SDimKind::One,
        ExprKind::Var(x) => SDimKind::Var(x.clone()),
        _ => unreachable!("checked by is_dim_arg"),
    };
    SDim { kind, span: e.span }
}
