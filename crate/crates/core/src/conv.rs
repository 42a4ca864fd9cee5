//! Definitional equality: type-directed η, structural comparison of normal
//! forms, and boundary separation — when two values differ structurally,
//! a free dimension is split into its two endpoints and both halves are
//! compared.

use std::rc::Rc;

use crate::domain::*;
use crate::eval::*;
use crate::quote::{path_telescope, pi_telescope, quote, quote_type, sg_telescope, Telescope};
use crate::syntax::{free_dimensions, Dim, Formula};

/// Runs `f` once per consistent branch of the assumptions.
fn per_branch(sc: &Scope, f: impl Fn(&Scope) -> bool) -> bool {
    if sc.state.is_inconsistent() {
        return true;
    }
    if sc.state.single().is_some() {
        return f(sc);
    }
    sc.state
        .consistent_branches()
        .into_iter()
        .all(|state| f(&sc.with_state(state)))
}

pub fn equal_types(sc: &Scope, a: &Val, b: &Val) -> bool {
    per_branch(sc, |sc| types_single(sc, a, b))
}

fn types_single(sc: &Scope, a: &Val, b: &Val) -> bool {
    let (a, b) = (whnf(sc, a), whnf(sc, b));
    match (&*a, &*b) {
        (Value::Split(bs), _) | (_, Value::Split(bs)) => bs
            .iter()
            .all(|(phi, _)| equal_types(&sc.assume(phi), &a, &b)),
        (Value::Pi(a1, b1), Value::Pi(a2, b2)) | (Value::Sg(a1, b1), Value::Sg(a2, b2))
            if std::mem::discriminant(&*a) == std::mem::discriminant(&*b) =>
        {
            if !equal_types(sc, a1, a2) {
                return false;
            }
            let (sc1, x) = sc.bind_term(a1.clone());
            equal_types(&sc1, &b1.apply(&sc1, x.clone()), &b2.apply(&sc1, x))
        }
        (Value::Path(l1, x0, x1), Value::Path(l2, y0, y1)) => {
            let (sci, i) = sc.bind_dim();
            equal_types(&sci, &l1.apply(&sci, i), &l2.apply(&sci, i))
                && equal_values(sc, &l1.apply(sc, Dim::Zero), x0, y0)
                && equal_values(sc, &l1.apply(sc, Dim::One), x1, y1)
        }
        (Value::Bool, Value::Bool) | (Value::Univ, Value::Univ) => true,
        (Value::El(c1), Value::El(c2)) => equal_values(sc, &univ(), c1, c2),
        _ => false,
    }
}

pub fn equal_values(sc: &Scope, ty: &Val, a: &Val, b: &Val) -> bool {
    per_branch(sc, |sc| values_single(sc, ty, a, b))
}

fn values_single(sc: &Scope, ty: &Val, a: &Val, b: &Val) -> bool {
    let ty = whnf(sc, ty);
    match &*ty {
        Value::Pi(dom, cod) => fun_eta(sc, dom, cod, a, b),
        Value::Sg(dom, cod) => pair_eta(sc, dom, cod, a, b),
        Value::Path(line, ..) => path_eta(sc, line, a, b),
        Value::Split(bs) => bs
            .iter()
            .all(|(phi, _)| equal_values(&sc.assume(phi), &ty, a, b)),
        Value::Univ => codes(sc, a, b),
        _ => base(sc, &ty, a, b),
    }
}

fn fun_eta(sc: &Scope, dom: &Val, cod: &Closure, f: &Val, g: &Val) -> bool {
    let (sc1, x) = sc.bind_term(dom.clone());
    equal_values(
        &sc1,
        &cod.apply(&sc1, x.clone()),
        &do_app(&sc1, f, &x),
        &do_app(&sc1, g, &x),
    )
}

fn pair_eta(sc: &Scope, dom: &Val, cod: &Closure, p: &Val, q: &Val) -> bool {
    let (p1, q1) = (do_fst(sc, p), do_fst(sc, q));
    equal_values(sc, dom, &p1, &q1) && equal_values(sc, &cod.apply(sc, p1), &do_snd(sc, p), &do_snd(sc, q))
}

fn path_eta(sc: &Scope, line: &DimClosure, p: &Val, q: &Val) -> bool {
    let (sc1, i) = sc.bind_dim();
    equal_values(&sc1, &line.apply(&sc1, i), &do_dapp(&sc1, p, i), &do_dapp(&sc1, q, i))
}

fn is_intro(v: &Value) -> bool {
    matches!(v, Value::Lam(_) | Value::Pair(..) | Value::DLam(_))
}

/// Comparison at `bool` and at decodings of stuck codes.
fn base(sc: &Scope, ty: &Val, a: &Val, b: &Val) -> bool {
    let (a, b) = (whnf(sc, a), whnf(sc, b));
    match (&*a, &*b) {
        (Value::Tt, Value::Tt) | (Value::Ff, Value::Ff) => true,
        (Value::Split(bs), _) | (_, Value::Split(bs)) => bs
            .iter()
            .all(|(phi, _)| equal_values(&sc.assume(phi), ty, &a, &b)),
        (x, y) if is_intro(x) || is_intro(y) => {
            let intro = if is_intro(x) { x } else { y };
            match intro {
                Value::Lam(_) => match unfold_pi(sc, ty) {
                    Some((dom, cod)) => fun_eta(sc, &dom, &cod, &a, &b),
                    None => false,
                },
                Value::Pair(..) => match unfold_sg(sc, ty) {
                    Some((dom, cod)) => pair_eta(sc, &dom, &cod, &a, &b),
                    None => false,
                },
                _ => match unfold_path(sc, ty) {
                    Some((line, ..)) => path_eta(sc, &line, &a, &b),
                    None => false,
                },
            }
        }
        (Value::Neutral(n1, _), Value::Neutral(n2, _)) if sc.session.quietly(|| neutrals(sc, n1, n2)) => true,
        _ => separate(sc, ty, &a, &b, base),
    }
}

fn codes(sc: &Scope, a: &Val, b: &Val) -> bool {
    let (a, b) = (whnf(sc, a), whnf(sc, b));
    match (&*a, &*b) {
        (Value::Split(bs), _) | (_, Value::Split(bs)) => bs
            .iter()
            .all(|(phi, _)| equal_values(&sc.assume(phi), &univ(), &a, &b)),
        (Value::CodePi(a1, b1), Value::CodePi(a2, b2)) | (Value::CodeSg(a1, b1), Value::CodeSg(a2, b2))
            if std::mem::discriminant(&*a) == std::mem::discriminant(&*b) =>
        {
            if !equal_values(sc, &univ(), a1, a2) {
                return false;
            }
            let (sc1, x) = sc.bind_term(el(a1));
            equal_values(&sc1, &univ(), &b1.apply(&sc1, x.clone()), &b2.apply(&sc1, x))
        }
        (Value::CodePath(l1, x0, x1), Value::CodePath(l2, y0, y1)) => {
            let (sci, i) = sc.bind_dim();
            equal_values(&sci, &univ(), &l1.apply(&sci, i), &l2.apply(&sci, i))
                && equal_values(sc, &el(&l1.apply(sc, Dim::Zero)), x0, y0)
                && equal_values(sc, &el(&l1.apply(sc, Dim::One)), x1, y1)
        }
        (Value::CodeBool, Value::CodeBool) => true,
        (Value::Neutral(n1, _), Value::Neutral(n2, _)) if sc.session.quietly(|| neutrals(sc, n1, n2)) => true,
        // The universe is not itself a code, so boundary separation does not
        // apply here.
        _ => {
            let u = univ();
            record(sc, &quote(sc, &u, &a), &quote(sc, &u, &b));
            false
        }
    }
}

/// Boundary separation: split a free dimension occurring in either side.
fn separate(
    sc: &Scope,
    ty: &Val,
    a: &Val,
    b: &Val,
    retry: fn(&Scope, &Val, &Val, &Val) -> bool,
) -> bool {
    let ty_t = quote_type(sc, ty);
    let (ta, tb) = (quote(sc, ty, a), quote(sc, ty, b));
    if ta == tb {
        return true;
    }
    let key: MemoKey = (sc.state.signature(), sc.depth, ty_t, ta.clone(), tb.clone());
    if let Some(&known) = sc.session.memo.borrow().get(&key) {
        return known;
    }
    let mentioned: Vec<u32> = free_dimensions(&ta)
        .union(&free_dimensions(&tb))
        .map(|ix| sc.dims() as u32 - 1 - ix)
        .collect();
    let candidate = sc.state.free_dims().into_iter().find(|l| mentioned.contains(l));
    let Some(level) = candidate else {
        record(sc, &ta, &tb);
        sc.session.memo.borrow_mut().insert(key, false);
        return false;
    };
    if sc.splits >= sc.session.max_splits {
        sc.session.exhausted.set(true);
        record(sc, &ta, &tb);
        return false;
    }
    let exhausted_before = sc.session.exhausted.replace(false);
    sc.session.splits_taken.set(sc.session.splits_taken.get() + 1);
    let i = Dim::Var(level);
    let equal = [Dim::Zero, Dim::One].into_iter().all(|end| {
        let mut half = sc.assume(&Formula::eq(i, end));
        half.splits += 1;
        retry(&half, ty, a, b)
    });
    let exhausted_here = sc.session.exhausted.get();
    if equal || !exhausted_here {
        sc.session.memo.borrow_mut().insert(key, equal);
    }
    sc.session.exhausted.set(exhausted_before || exhausted_here);
    equal
}

fn record(sc: &Scope, ta: &crate::syntax::Term, tb: &crate::syntax::Term) {
    if sc.session.quiet.get() > 0 || sc.session.mismatch.borrow().is_some() {
        return;
    }
    *sc.session.mismatch.borrow_mut() = Some(Mismatch {
        state: sc.state.clone(),
        terms: sc.depth,
        left: ta.clone(),
        right: tb.clone(),
    });
}

fn neutrals(sc: &Scope, n1: &Neutral, n2: &Neutral) -> bool {
    if n1.spine.len() != n2.spine.len() || !heads(sc, &n1.head, &n2.head) {
        return false;
    }
    n1.spine.iter().zip(&n2.spine).all(|(f1, f2)| frames(sc, f1, f2))
}

fn same_dim(sc: &Scope, r: Dim, s: Dim) -> bool {
    sc.holds(r, s)
}

fn heads(sc: &Scope, h1: &Head, h2: &Head) -> bool {
    match (h1, h2) {
        (Head::Var { level: l1, .. }, Head::Var { level: l2, .. }) => l1 == l2,
        (
            Head::Coe {
                from: r1,
                to: s1,
                line: l1,
                arg: a1,
            },
            Head::Coe {
                from: r2,
                to: s2,
                line: l2,
                arg: a2,
            },
        ) => {
            if !same_dim(sc, *r1, *r2) || !same_dim(sc, *s1, *s2) {
                return false;
            }
            let (sci, i) = sc.bind_dim();
            equal_values(&sci, &univ(), &l1.apply(&sci, i), &l2.apply(&sci, i))
                && equal_values(sc, &el(&l1.apply(sc, *r1)), a1, a2)
        }
        (
            Head::Hcom {
                from: r1,
                to: s1,
                wall: w1,
                code: c1,
                tube: t1,
            },
            Head::Hcom {
                from: r2,
                to: s2,
                wall: w2,
                code: c2,
                tube: t2,
            },
        ) => {
            if !same_dim(sc, *r1, *r2) || !same_dim(sc, *s1, *s2) || !same_dim(sc, *w1, *w2) {
                return false;
            }
            if !equal_values(sc, &univ(), c1, c2) {
                return false;
            }
            let (sck, k) = sc.bind_dim();
            let sck = sck.assume(&Formula::eq(k, *r1).or(Formula::boundary(*w1)));
            equal_values(&sck, &el(c1), &t1.apply(&sck, k), &t2.apply(&sck, k))
        }
        _ => false,
    }
}

fn frames(sc: &Scope, f1: &Frame, f2: &Frame) -> bool {
    match (f1, f2) {
        (Frame::App { arg: a1, arg_ty }, Frame::App { arg: a2, .. }) => equal_values(sc, arg_ty, a1, a2),
        (Frame::Fst, Frame::Fst) | (Frame::Snd, Frame::Snd) => true,
        (Frame::DApp(r), Frame::DApp(s)) => same_dim(sc, *r, *s),
        (
            Frame::If {
                motive: m1,
                tt: t1,
                ff: e1,
            },
            Frame::If {
                motive: m2,
                tt: t2,
                ff: e2,
            },
        ) => {
            let (sc1, x) = sc.bind_term(Rc::new(Value::Bool));
            let tt = Rc::new(Value::Tt);
            let ff = Rc::new(Value::Ff);
            equal_types(&sc1, &m1.apply(&sc1, x.clone()), &m2.apply(&sc1, x))
                && equal_values(sc, &m1.apply(sc, tt), t1, t2)
                && equal_values(sc, &m1.apply(sc, ff), e1, e2)
        }
        (
            Frame::TypeCase {
                motive: m1,
                pi: p1,
                sg: s1,
                path: q1,
                bool: b1,
            },
            Frame::TypeCase {
                motive: m2,
                pi: p2,
                sg: s2,
                path: q2,
                bool: b2,
            },
        ) => {
            let (sc1, u) = sc.bind_term(univ());
            if !equal_types(&sc1, &m1.apply(&sc1, u.clone()), &m2.apply(&sc1, u)) {
                return false;
            }
            let branch = |tele: Telescope, x: &MultiClosure, y: &MultiClosure| {
                let ty = m1.apply(&tele.scope, tele.code.clone());
                equal_values(&tele.scope, &ty, &x.apply(&tele.scope, &tele.args), &y.apply(&tele.scope, &tele.args))
            };
            branch(pi_telescope(sc), p1, p2)
                && branch(sg_telescope(sc), s1, s2)
                && branch(path_telescope(sc), q1, q2)
                && equal_values(sc, &m1.apply(sc, Rc::new(Value::CodeBool)), b1, b2)
        }
        _ => false,
    }
}

/// Outcome of a top-level conversion query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unequal,
    /// The splitting budget ran out before a decision.
    Undecided,
}

fn verdict(sc: &Scope, equal: bool) -> Verdict {
    match (equal, sc.session.exhausted.get()) {
        (true, _) => Verdict::Equal,
        (false, true) => Verdict::Undecided,
        (false, false) => Verdict::Unequal,
    }
}

pub fn check_values(sc: &Scope, ty: &Val, a: &Val, b: &Val) -> Verdict {
    sc.session.reset_diagnostics();
    let equal = equal_values(sc, ty, a, b);
    verdict(sc, equal)
}

pub fn check_types(sc: &Scope, a: &Val, b: &Val) -> Verdict {
    sc.session.reset_diagnostics();
    let equal = equal_types(sc, a, b);
    verdict(sc, equal)
}
