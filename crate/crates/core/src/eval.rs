//! Evaluation of core terms and the semantic eliminators, including the Kan
//! operations and the structural decomposition of codes.

use std::rc::Rc;

use crate::conv;
use crate::domain::*;
use crate::quote;
use crate::syntax::{free_dimensions, Dim, Formula, Name, Term};

pub fn univ() -> Val {
    Rc::new(Value::Univ)
}

pub fn el(code: &Val) -> Val {
    Rc::new(Value::El(code.clone()))
}

fn closure(env: &Env, (name, body): &(Name, crate::syntax::RcTerm)) -> Closure {
    Closure::Term {
        name: name.clone(),
        env: env.clone(),
        body: body.clone(),
    }
}

fn dim_closure(env: &Env, (name, body): &(Name, crate::syntax::RcTerm)) -> DimClosure {
    DimClosure::Term {
        name: name.clone(),
        env: env.clone(),
        body: body.clone(),
    }
}

fn multi<const N: usize>(env: &Env, (names, body): &([Name; N], crate::syntax::RcTerm)) -> MultiClosure {
    MultiClosure {
        names: names.to_vec(),
        env: env.clone(),
        body: body.clone(),
    }
}

pub fn eval(sc: &Scope, env: &Env, t: &Term) -> Val {
    match t {
        Term::Var(ix) => env.term(*ix),
        Term::Lam(x, b) => Rc::new(Value::Lam(closure(env, &(x.clone(), b.clone())))),
        Term::App(f, a) => do_app(sc, &eval(sc, env, f), &eval(sc, env, a)),
        Term::Pair(a, b) => Rc::new(Value::Pair(eval(sc, env, a), eval(sc, env, b))),
        Term::Fst(p) => do_fst(sc, &eval(sc, env, p)),
        Term::Snd(p) => do_snd(sc, &eval(sc, env, p)),
        Term::DLam(i, b) => Rc::new(Value::DLam(dim_closure(env, &(i.clone(), b.clone())))),
        Term::DApp(p, r) => do_dapp(sc, &eval(sc, env, p), env.dim(*r)),
        Term::Tt => Rc::new(Value::Tt),
        Term::Ff => Rc::new(Value::Ff),
        Term::If {
            motive,
            scrut,
            tt,
            ff,
        } => do_if(
            sc,
            &closure(env, motive),
            &eval(sc, env, scrut),
            &eval(sc, env, tt),
            &eval(sc, env, ff),
        ),
        Term::Abort => {
            assert!(
                sc.state.is_inconsistent(),
                "kernel fault: abort evaluated under consistent assumptions"
            );
            Rc::new(Value::Abort)
        }
        Term::Split(bs) => make_split(
            sc,
            bs.iter()
                .map(|(phi, b)| (env.formula(phi), Thunk::of_term(env.clone(), b.clone())))
                .collect(),
        ),
        Term::Coe {
            from,
            to,
            line,
            arg,
        } => do_coe(
            sc,
            env.dim(*from),
            env.dim(*to),
            &dim_closure(env, line),
            &eval(sc, env, arg),
        ),
        Term::Com {
            from,
            to,
            wall,
            line,
            tube,
        } => {
            let (r, r2, s) = (env.dim(*from), env.dim(*to), env.dim(*wall));
            let tube = dim_closure(env, tube);
            if free_dimensions(&line.1).contains(&0) {
                do_com(sc, r, r2, s, &dim_closure(env, line), &tube)
            } else {
                let code = eval(sc, &env.push_dim(Dim::Zero), &line.1);
                do_hcom(sc, r, r2, s, &code, &tube)
            }
        }
        Term::Pi(x, a, b) => Rc::new(Value::Pi(eval(sc, env, a), closure(env, &(x.clone(), b.clone())))),
        Term::Sg(x, a, b) => Rc::new(Value::Sg(eval(sc, env, a), closure(env, &(x.clone(), b.clone())))),
        Term::Path { line, left, right } => Rc::new(Value::Path(
            dim_closure(env, line),
            eval(sc, env, left),
            eval(sc, env, right),
        )),
        Term::Bool => Rc::new(Value::Bool),
        Term::Univ => univ(),
        Term::El(c) => do_el(sc, &eval(sc, env, c)),
        Term::CodePi(x, a, b) => Rc::new(Value::CodePi(
            eval(sc, env, a),
            closure(env, &(x.clone(), b.clone())),
        )),
        Term::CodeSg(x, a, b) => Rc::new(Value::CodeSg(
            eval(sc, env, a),
            closure(env, &(x.clone(), b.clone())),
        )),
        Term::CodePath { line, left, right } => Rc::new(Value::CodePath(
            dim_closure(env, line),
            eval(sc, env, left),
            eval(sc, env, right),
        )),
        Term::CodeBool => Rc::new(Value::CodeBool),
        Term::TypeCase {
            motive,
            scrut,
            pi,
            sg,
            path,
            bool,
        } => do_typecase(
            sc,
            &TypeCaseBranches {
                motive: closure(env, motive),
                pi: multi(env, pi),
                sg: multi(env, sg),
                path: multi(env, path),
                bool: eval(sc, env, bool),
            },
            &eval(sc, env, scrut),
        ),
    }
}

/// Builds a partial element, committing to the first branch whose formula is
/// already entailed.
pub fn make_split(sc: &Scope, bs: Vec<(Formula, Thunk)>) -> Val {
    if sc.state.is_inconsistent() {
        return Rc::new(Value::Abort);
    }
    for (phi, th) in &bs {
        if sc.entails(phi) {
            return th.force(sc);
        }
    }
    Rc::new(Value::Split(bs))
}

/// Pushes an operation into every branch of a partial element.
fn distribute(sc: &Scope, bs: &[(Formula, Thunk)], f: impl Fn(&Scope, &Val) -> Val + Clone + 'static) -> Val {
    let mapped = bs
        .iter()
        .map(|(phi, th)| {
            let th = th.clone();
            let f = f.clone();
            (phi.clone(), Thunk::new(move |sc| f(sc, &th.force(sc))))
        })
        .collect();
    make_split(sc, mapped)
}

fn abort() -> Val {
    Rc::new(Value::Abort)
}

fn extend(ne: &Neutral, frame: Frame) -> Rc<Neutral> {
    let mut next = ne.clone();
    next.spine.push(frame);
    Rc::new(next)
}

pub fn do_app(sc: &Scope, f: &Val, a: &Val) -> Val {
    match &**f {
        Value::Lam(c) => c.apply(sc, a.clone()),
        Value::Neutral(ne, ty) => match unfold_pi(sc, ty) {
            Some((dom, cod)) => Rc::new(Value::Neutral(
                extend(ne, Frame::App {
                    arg: a.clone(),
                    arg_ty: dom,
                }),
                cod.apply(sc, a.clone()),
            )),
            None if sc.state.is_inconsistent() => abort(),
            None => panic!("kernel fault: application of a non-function"),
        },
        Value::Split(bs) => {
            let a = a.clone();
            distribute(sc, bs, move |sc, f| do_app(sc, f, &a))
        }
        Value::Abort => abort(),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: application of {other:?}"),
    }
}

pub fn do_fst(sc: &Scope, p: &Val) -> Val {
    match &**p {
        Value::Pair(a, _) => a.clone(),
        Value::Neutral(ne, ty) => match unfold_sg(sc, ty) {
            Some((a, _)) => Rc::new(Value::Neutral(extend(ne, Frame::Fst), a)),
            None if sc.state.is_inconsistent() => abort(),
            None => panic!("kernel fault: projection from a non-pair"),
        },
        Value::Split(bs) => distribute(sc, bs, do_fst),
        Value::Abort => abort(),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: projection from {other:?}"),
    }
}

pub fn do_snd(sc: &Scope, p: &Val) -> Val {
    match &**p {
        Value::Pair(_, b) => b.clone(),
        Value::Neutral(ne, ty) => match unfold_sg(sc, ty) {
            Some((_, fam)) => {
                let fst = do_fst(sc, p);
                Rc::new(Value::Neutral(extend(ne, Frame::Snd), fam.apply(sc, fst)))
            }
            None if sc.state.is_inconsistent() => abort(),
            None => panic!("kernel fault: projection from a non-pair"),
        },
        Value::Split(bs) => distribute(sc, bs, do_snd),
        Value::Abort => abort(),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: projection from {other:?}"),
    }
}

pub fn do_dapp(sc: &Scope, p: &Val, r: Dim) -> Val {
    match &**p {
        Value::DLam(c) => c.apply(sc, r),
        Value::Neutral(ne, ty) => match unfold_path(sc, ty) {
            Some((line, a0, a1)) => {
                if sc.holds(r, Dim::Zero) {
                    a0
                } else if sc.holds(r, Dim::One) {
                    a1
                } else {
                    Rc::new(Value::Neutral(extend(ne, Frame::DApp(r)), line.apply(sc, r)))
                }
            }
            None if sc.state.is_inconsistent() => abort(),
            None => panic!("kernel fault: dimension application of a non-path"),
        },
        Value::Split(bs) => distribute(sc, bs, move |sc, p| do_dapp(sc, p, r)),
        Value::Abort => abort(),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: dimension application of {other:?}"),
    }
}

pub fn do_if(sc: &Scope, motive: &Closure, b: &Val, t: &Val, f: &Val) -> Val {
    match &**b {
        Value::Tt => t.clone(),
        Value::Ff => f.clone(),
        Value::Neutral(ne, _) => Rc::new(Value::Neutral(
            extend(ne, Frame::If {
                motive: motive.clone(),
                tt: t.clone(),
                ff: f.clone(),
            }),
            motive.apply(sc, b.clone()),
        )),
        Value::Split(bs) => {
            let (motive, t, f) = (motive.clone(), t.clone(), f.clone());
            distribute(sc, bs, move |sc, b| do_if(sc, &motive, b, &t, &f))
        }
        Value::Abort => abort(),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: case analysis on {other:?}"),
    }
}

#[derive(Clone)]
pub struct TypeCaseBranches {
    pub motive: Closure,
    pub pi: MultiClosure,
    pub sg: MultiClosure,
    pub path: MultiClosure,
    pub bool: Val,
}

pub fn do_typecase(sc: &Scope, br: &TypeCaseBranches, code: &Val) -> Val {
    match &**code {
        Value::CodePi(a, b) => br.pi.apply(sc, &[a.clone(), family(b)]),
        Value::CodeSg(a, b) => br.sg.apply(sc, &[a.clone(), family(b)]),
        Value::CodePath(line, a0, a1) => br.path.apply(
            sc,
            &[
                line.apply(sc, Dim::Zero),
                line.apply(sc, Dim::One),
                Rc::new(Value::DLam(line.clone())),
                a0.clone(),
                a1.clone(),
            ],
        ),
        Value::CodeBool => br.bool.clone(),
        Value::Neutral(ne, _) => Rc::new(Value::Neutral(
            extend(ne, Frame::TypeCase {
                motive: br.motive.clone(),
                pi: br.pi.clone(),
                sg: br.sg.clone(),
                path: br.path.clone(),
                bool: br.bool.clone(),
            }),
            br.motive.apply(sc, code.clone()),
        )),
        Value::Split(bs) => {
            let br = br.clone();
            distribute(sc, bs, move |sc, c| do_typecase(sc, &br, c))
        }
        Value::Abort => abort(),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: type case on {other:?}"),
    }
}

/// A code family as a function value.
fn family(b: &Closure) -> Val {
    Rc::new(Value::Lam(b.clone()))
}

pub fn do_el(sc: &Scope, code: &Val) -> Val {
    match &**code {
        Value::CodePi(a, b) => {
            let (b, name) = (b.clone(), b.name().clone());
            Rc::new(Value::Pi(
                do_el(sc, a),
                Closure::host(name.as_str(), move |sc, x| do_el(sc, &b.apply(sc, x))),
            ))
        }
        Value::CodeSg(a, b) => {
            let (b, name) = (b.clone(), b.name().clone());
            Rc::new(Value::Sg(
                do_el(sc, a),
                Closure::host(name.as_str(), move |sc, x| do_el(sc, &b.apply(sc, x))),
            ))
        }
        Value::CodePath(line, a0, a1) => {
            let (line, name) = (line.clone(), line.name().clone());
            Rc::new(Value::Path(
                DimClosure::host(name.as_str(), move |sc, i| do_el(sc, &line.apply(sc, i))),
                a0.clone(),
                a1.clone(),
            ))
        }
        Value::CodeBool => Rc::new(Value::Bool),
        Value::Abort => abort(),
        Value::Neutral(..) | Value::Split(_) => el(code),
        _ if sc.state.is_inconsistent() => abort(),
        other => panic!("kernel fault: decoding {other:?}, which is not a code"),
    }
}

/// Brings a value up to date with the assumptions of `sc`: stuck
/// computations are replayed and partial elements re-examined.
pub fn whnf(sc: &Scope, v: &Val) -> Val {
    if sc.state.is_inconsistent() {
        return abort();
    }
    match &**v {
        Value::Neutral(ne, _) => replay(sc, v, ne),
        Value::Split(bs) => {
            for (phi, th) in bs {
                if sc.entails(phi) {
                    return whnf(sc, &th.force(sc));
                }
            }
            v.clone()
        }
        Value::El(c) => {
            let c2 = whnf(sc, c);
            match &*c2 {
                Value::Neutral(..) | Value::Split(_) if Rc::ptr_eq(c, &c2) => v.clone(),
                _ => do_el(sc, &c2),
            }
        }
        _ => v.clone(),
    }
}

fn replay(sc: &Scope, v: &Val, ne: &Neutral) -> Val {
    let sensitive = |f: &Frame| matches!(f, Frame::DApp(_));
    let mut out = match &ne.head {
        Head::Var { .. } if !ne.spine.iter().any(sensitive) => return v.clone(),
        Head::Var { level, ty } => Value::var(*level, ty.clone()),
        Head::Coe {
            from,
            to,
            line,
            arg,
        } => do_coe(sc, *from, *to, line, arg),
        Head::Hcom {
            from,
            to,
            wall,
            code,
            tube,
        } => do_hcom(sc, *from, *to, *wall, code, tube),
    };
    for frame in &ne.spine {
        out = match frame {
            Frame::App { arg, .. } => do_app(sc, &out, arg),
            Frame::Fst => do_fst(sc, &out),
            Frame::Snd => do_snd(sc, &out),
            Frame::DApp(r) => do_dapp(sc, &out, *r),
            Frame::If { motive, tt, ff } => do_if(sc, motive, &out, tt, ff),
            Frame::TypeCase {
                motive,
                pi,
                sg,
                path,
                bool,
            } => do_typecase(
                sc,
                &TypeCaseBranches {
                    motive: motive.clone(),
                    pi: pi.clone(),
                    sg: sg.clone(),
                    path: path.clone(),
                    bool: bool.clone(),
                },
                &out,
            ),
        };
    }
    match &*out {
        Value::Split(_) => whnf(sc, &out),
        _ => out,
    }
}

/// Views a type as a Π-type, looking through decodings of stuck codes.
pub fn unfold_pi(sc: &Scope, ty: &Val) -> Option<(Val, Closure)> {
    let ty = whnf(sc, ty);
    match &*ty {
        Value::Pi(a, b) => Some((a.clone(), b.clone())),
        Value::El(code) => {
            let dom = project(sc, Projection::PiDom, code);
            let cod = project(sc, Projection::PiCod, code);
            Some((
                do_el(sc, &dom),
                Closure::host("x", move |sc, x| do_el(sc, &do_app(sc, &cod, &x))),
            ))
        }
        _ => None,
    }
}

pub fn unfold_sg(sc: &Scope, ty: &Val) -> Option<(Val, Closure)> {
    let ty = whnf(sc, ty);
    match &*ty {
        Value::Sg(a, b) => Some((a.clone(), b.clone())),
        Value::El(code) => {
            let dom = project(sc, Projection::SgDom, code);
            let cod = project(sc, Projection::SgCod, code);
            Some((
                do_el(sc, &dom),
                Closure::host("x", move |sc, x| do_el(sc, &do_app(sc, &cod, &x))),
            ))
        }
        _ => None,
    }
}

pub fn unfold_path(sc: &Scope, ty: &Val) -> Option<(DimClosure, Val, Val)> {
    let ty = whnf(sc, ty);
    match &*ty {
        Value::Path(line, a0, a1) => Some((line.clone(), a0.clone(), a1.clone())),
        Value::El(code) => {
            let up = project(sc, Projection::PathLine, code);
            Some((
                DimClosure::host("i", move |sc, i| do_el(sc, &do_dapp(sc, &up, i))),
                project(sc, Projection::PathLeft, code),
                project(sc, Projection::PathRight, code),
            ))
        }
        _ => None,
    }
}

/// The components a code exposes through type case. Non-matching codes
/// answer with fixed defaults (`bool^`, `λ_.bool^`, `⟨_⟩bool^`, `tt`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    PiDom,
    PiCod,
    SgDom,
    SgCod,
    PathLeftCode,
    PathRightCode,
    PathLine,
    PathLeft,
    PathRight,
}

fn rc(t: Term) -> crate::syntax::RcTerm {
    Rc::new(t)
}

/// The projection as a core term whose scrutinee is `scrut`.
pub fn projection(which: Projection, scrut: Term) -> Term {
    use Projection::*;
    let x = Name::new("x");
    let anon = Name::anon;
    let names2 = || [Name::new("A"), Name::new("B")];
    let names5 = || {
        [
            Name::new("A0"),
            Name::new("A1"),
            Name::new("A"),
            Name::new("a0"),
            Name::new("a1"),
        ]
    };
    // Inside the motive the scrutinee is the motive's own binder.
    let c = || Term::Var(0);
    let motive = match which {
        PiDom | SgDom | PathLeftCode | PathRightCode => Term::Univ,
        PiCod => Term::Pi(anon(), rc(Term::El(rc(projection(PiDom, c())))), rc(Term::Univ)),
        SgCod => Term::Pi(anon(), rc(Term::El(rc(projection(SgDom, c())))), rc(Term::Univ)),
        PathLine => Term::Path {
            line: (anon(), rc(Term::Univ)),
            left: rc(projection(PathLeftCode, c())),
            right: rc(projection(PathRightCode, c())),
        },
        PathLeft => Term::El(rc(projection(PathLeftCode, c()))),
        PathRight => Term::El(rc(projection(PathRightCode, c()))),
    };
    let default = match which {
        PiDom | SgDom | PathLeftCode | PathRightCode => Term::CodeBool,
        PiCod | SgCod => Term::Lam(anon(), rc(Term::CodeBool)),
        PathLine => Term::DLam(anon(), rc(Term::CodeBool)),
        PathLeft | PathRight => Term::Tt,
    };
    let pick = |hit: Option<u32>| hit.map_or_else(|| default.clone(), Term::Var);
    let (pi, sg, path) = match which {
        PiDom => (Some(1), None, None),
        PiCod => (Some(0), None, None),
        SgDom => (None, Some(1), None),
        SgCod => (None, Some(0), None),
        PathLeftCode => (None, None, Some(4)),
        PathRightCode => (None, None, Some(3)),
        PathLine => (None, None, Some(2)),
        PathLeft => (None, None, Some(1)),
        PathRight => (None, None, Some(0)),
    };
    Term::TypeCase {
        motive: (x, rc(motive)),
        scrut: rc(scrut),
        pi: (names2(), rc(pick(pi))),
        sg: (names2(), rc(pick(sg))),
        path: (names5(), rc(pick(path))),
        bool: rc(default.clone()),
    }
}

/// A component of a code value; concrete codes answer directly.
pub fn project(sc: &Scope, which: Projection, code: &Val) -> Val {
    use Projection::*;
    let code = whnf(sc, code);
    match (which, &*code) {
        (PiDom, Value::CodePi(a, _)) | (SgDom, Value::CodeSg(a, _)) => a.clone(),
        (PiCod, Value::CodePi(_, b)) | (SgCod, Value::CodeSg(_, b)) => family(b),
        (PathLeftCode, Value::CodePath(line, ..)) => line.apply(sc, Dim::Zero),
        (PathRightCode, Value::CodePath(line, ..)) => line.apply(sc, Dim::One),
        (PathLine, Value::CodePath(line, ..)) => Rc::new(Value::DLam(line.clone())),
        (PathLeft, Value::CodePath(_, a0, _)) => a0.clone(),
        (PathRight, Value::CodePath(_, _, a1)) => a1.clone(),
        _ => {
            let env = Env {
                terms: vec![code.clone()],
                dims: Vec::new(),
            };
            eval(sc, &env, &projection(which, Term::Var(0)))
        }
    }
}

/// Whether the level-`i` dimension occurs in the normal form of `v` in some
/// consistent branch of the assumptions.
pub fn mentions_dim(sc: &Scope, ty: &Val, v: &Val, i: Dim) -> bool {
    let Dim::Var(level) = i else { return false };
    let index = sc.dims() as u32 - 1 - level;
    sc.state.consistent_branches().into_iter().any(|state| {
        let sc = sc.with_state(state);
        if sc.state.normalize_dim(i) != i {
            return false;
        }
        free_dimensions(&quote::quote(&sc, ty, v)).contains(&index)
    })
}

/// Semantic degeneracy of a line of codes: its values at two fresh
/// dimensions are convertible.
fn line_constant(sc: &Scope, line: &DimClosure) -> bool {
    let (s1, i) = sc.bind_dim();
    let (s2, j) = s1.bind_dim();
    let (a, b) = (line.apply(&s2, i), line.apply(&s2, j));
    sc.session.quietly(|| conv::equal_values(&s2, &univ(), &a, &b))
}

pub fn do_coe(sc: &Scope, r: Dim, r2: Dim, line: &DimClosure, a: &Val) -> Val {
    if sc.holds(r, r2) {
        return a.clone();
    }
    let (sci, i) = sc.bind_dim();
    let code_i = whnf(&sci, &line.apply(&sci, i));
    if !mentions_dim(&sci, &univ(), &code_i, i) {
        return a.clone();
    }
    match &*code_i {
        Value::CodeBool => a.clone(),
        Value::CodePi(..) => coe_pi(sc, r, r2, line, a),
        Value::CodeSg(..) => coe_sg(sc, r, r2, line, a),
        Value::CodePath(..) => coe_path(sc, r, r2, line, a),
        Value::Split(bs) if bs.iter().all(|(phi, _)| phi.dims().all(|d| d != i)) => {
            let (line, a) = (line.clone(), a.clone());
            let bs: Vec<_> = bs
                .iter()
                .map(|(phi, _)| {
                    let (line, a) = (line.clone(), a.clone());
                    (phi.clone(), Thunk::new(move |sc| do_coe(sc, r, r2, &line, &a)))
                })
                .collect();
            make_split(sc, bs)
        }
        _ => {
            if line_constant(sc, line) {
                return a.clone();
            }
            let ty = el(&line.apply(sc, r2));
            Rc::new(Value::Neutral(
                Rc::new(Neutral {
                    head: Head::Coe {
                        from: r,
                        to: r2,
                        line: line.clone(),
                        arg: a.clone(),
                    },
                    spine: Vec::new(),
                }),
                ty,
            ))
        }
    }
}

fn coe_pi(_sc: &Scope, r: Dim, r2: Dim, line: &DimClosure, f: &Val) -> Val {
    let dom_line = {
        let line = line.clone();
        DimClosure::host("i", move |sc, i| project(sc, Projection::PiDom, &line.apply(sc, i)))
    };
    let (line, f) = (line.clone(), f.clone());
    Rc::new(Value::Lam(Closure::host("x", move |sc, x| {
        let x_back = do_coe(sc, r2, r, &dom_line, &x);
        let fx = do_app(sc, &f, &x_back);
        let cod_line = {
            let (line, dom_line, x) = (line.clone(), dom_line.clone(), x.clone());
            DimClosure::host("i", move |sc, j| {
                let cod = project(sc, Projection::PiCod, &line.apply(sc, j));
                do_app(sc, &cod, &do_coe(sc, r2, j, &dom_line, &x))
            })
        };
        do_coe(sc, r, r2, &cod_line, &fx)
    })))
}

fn coe_sg(sc: &Scope, r: Dim, r2: Dim, line: &DimClosure, p: &Val) -> Val {
    let dom_line = {
        let line = line.clone();
        DimClosure::host("i", move |sc, i| project(sc, Projection::SgDom, &line.apply(sc, i)))
    };
    let a = do_fst(sc, p);
    let fst = do_coe(sc, r, r2, &dom_line, &a);
    let cod_line = {
        let line = line.clone();
        DimClosure::host("i", move |sc, j| {
            let cod = project(sc, Projection::SgCod, &line.apply(sc, j));
            do_app(sc, &cod, &do_coe(sc, r, j, &dom_line, &a))
        })
    };
    let snd = do_coe(sc, r, r2, &cod_line, &do_snd(sc, p));
    Rc::new(Value::Pair(fst, snd))
}

fn coe_path(_sc: &Scope, r: Dim, r2: Dim, line: &DimClosure, p: &Val) -> Val {
    let (line, p) = (line.clone(), p.clone());
    Rc::new(Value::DLam(DimClosure::host("j", move |sc, j| {
        let body_line = {
            let line = line.clone();
            DimClosure::host("i", move |sc, i| {
                let up = project(sc, Projection::PathLine, &line.apply(sc, i));
                do_dapp(sc, &up, j)
            })
        };
        let tube = {
            let (line, p) = (line.clone(), p.clone());
            DimClosure::host("i", move |sc, i| {
                let p = p.clone();
                let line = line.clone();
                let ends = Thunk::new(move |sc| {
                    let (l0, l1) = (line.clone(), line.clone());
                    make_split(
                        sc,
                        vec![
                            (
                                Formula::eq(j, Dim::Zero),
                                Thunk::new(move |sc| project(sc, Projection::PathLeft, &l0.apply(sc, i))),
                            ),
                            (
                                Formula::eq(j, Dim::One),
                                Thunk::new(move |sc| project(sc, Projection::PathRight, &l1.apply(sc, i))),
                            ),
                        ],
                    )
                });
                make_split(
                    sc,
                    vec![
                        (Formula::eq(i, r), Thunk::new(move |sc| do_dapp(sc, &p, j))),
                        (Formula::boundary(j), ends),
                    ],
                )
            })
        };
        do_com(sc, r, r2, j, &body_line, &tube)
    })))
}

/// Whether the tube is constant in its dimension wherever it is defined,
/// judged on normal forms.
fn tube_constant_syntactic(sc: &Scope, r: Dim, s: Dim, code: &Val, tube: &DimClosure) -> bool {
    let (sck, k) = sc.bind_dim();
    let sck = sck.assume(&Formula::eq(k, r).or(Formula::boundary(s)));
    let v = tube.apply(&sck, k);
    !mentions_dim(&sck, &el(code), &v, k)
}

fn tube_constant_semantic(sc: &Scope, r: Dim, s: Dim, code: &Val, tube: &DimClosure) -> bool {
    let (s1, k) = sc.bind_dim();
    let (s2, k2) = s1.bind_dim();
    let s3 = s2
        .assume(&Formula::eq(k, r).or(Formula::boundary(s)))
        .assume(&Formula::eq(k2, r).or(Formula::boundary(s)));
    let (a, b) = (tube.apply(&s3, k), tube.apply(&s3, k2));
    sc.session.quietly(|| conv::equal_values(&s3, &el(code), &a, &b))
}

pub fn do_hcom(sc: &Scope, r: Dim, r2: Dim, s: Dim, code: &Val, tube: &DimClosure) -> Val {
    if sc.holds(r, r2) || sc.entails(&Formula::boundary(s)) {
        return tube.apply(sc, r2);
    }
    let code = whnf(sc, code);
    if tube_constant_syntactic(sc, r, s, &code, tube) {
        return tube.apply(sc, r);
    }
    match &*code {
        Value::CodeBool => tube.apply(sc, r),
        Value::CodePi(_, b) => {
            let (b, tube) = (b.clone(), tube.clone());
            Rc::new(Value::Lam(Closure::host("x", move |sc, x| {
                let fam = b.apply(sc, x.clone());
                let tube = tube.clone();
                let pointwise = DimClosure::host("k", move |sc, k| do_app(sc, &tube.apply(sc, k), &x));
                do_hcom(sc, r, r2, s, &fam, &pointwise)
            })))
        }
        Value::CodeSg(a, b) => {
            let fst_tube = {
                let tube = tube.clone();
                DimClosure::host("k", move |sc, k| do_fst(sc, &tube.apply(sc, k)))
            };
            let fst = do_hcom(sc, r, r2, s, a, &fst_tube);
            let snd_line = {
                let (a, b) = (a.clone(), b.clone());
                DimClosure::host("k", move |sc, k| b.apply(sc, do_hcom(sc, r, k, s, &a, &fst_tube)))
            };
            let snd_tube = {
                let tube = tube.clone();
                DimClosure::host("k", move |sc, k| do_snd(sc, &tube.apply(sc, k)))
            };
            let snd = do_com(sc, r, r2, s, &snd_line, &snd_tube);
            Rc::new(Value::Pair(fst, snd))
        }
        Value::CodePath(line, _, _) => {
            let (line, tube) = (line.clone(), tube.clone());
            Rc::new(Value::DLam(DimClosure::host("j", move |sc, j| {
                let tube = tube.clone();
                let pointwise = DimClosure::host("k", move |sc, k| do_dapp(sc, &tube.apply(sc, k), j));
                do_hcom(sc, r, r2, s, &line.apply(sc, j), &pointwise)
            })))
        }
        Value::Split(bs) => {
            let tube = tube.clone();
            distribute(sc, bs, move |sc, code| do_hcom(sc, r, r2, s, code, &tube))
        }
        Value::Abort => abort(),
        _ => {
            if tube_constant_semantic(sc, r, s, &code, tube) {
                return tube.apply(sc, r);
            }
            Rc::new(Value::Neutral(
                Rc::new(Neutral {
                    head: Head::Hcom {
                        from: r,
                        to: r2,
                        wall: s,
                        code: code.clone(),
                        tube: tube.clone(),
                    },
                    spine: Vec::new(),
                }),
                el(&code),
            ))
        }
    }
}

/// Heterogeneous composition, reduced to coercion followed by homogeneous
/// composition at the target code.
pub fn do_com(sc: &Scope, r: Dim, r2: Dim, s: Dim, line: &DimClosure, tube: &DimClosure) -> Val {
    if sc.holds(r, r2) || sc.entails(&Formula::boundary(s)) {
        return tube.apply(sc, r2);
    }
    let code = line.apply(sc, r2);
    let coerced = {
        let (line, tube) = (line.clone(), tube.clone());
        DimClosure::host("k", move |sc, k| do_coe(sc, k, r2, &line, &tube.apply(sc, k)))
    };
    do_hcom(sc, r, r2, s, &code, &coerced)
}
