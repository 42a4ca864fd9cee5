//! Read-back of values into β-normal, η-long core terms.

use std::rc::Rc;

use crate::domain::*;
use crate::eval::*;
use crate::syntax::{Dim, Formula, Name, Term};

fn rc(t: Term) -> Rc<Term> {
    Rc::new(t)
}

pub fn quote_dim(sc: &Scope, r: Dim) -> Dim {
    match sc.state.normalize_dim(r) {
        Dim::Var(l) => Dim::Var(sc.dims() as u32 - 1 - l),
        c => c,
    }
}

/// Formulas are read back without normalization: their meaning depends on
/// the branch, and the context keeps them apart.
pub fn quote_formula(sc: &Scope, phi: &Formula) -> Formula {
    phi.map_dims(&mut |r| match r {
        Dim::Var(l) => Dim::Var(sc.dims() as u32 - 1 - l),
        c => c,
    })
}

pub fn quote(sc: &Scope, ty: &Val, v: &Val) -> Term {
    if sc.state.is_inconsistent() {
        return Term::Abort;
    }
    let ty = whnf(sc, ty);
    match &*ty {
        Value::Pi(a, b) => quote_fun(sc, a, b, v),
        Value::Sg(a, b) => quote_pair(sc, a, b, v),
        Value::Path(line, ..) => quote_dfun(sc, line, v),
        Value::Univ => quote_code(sc, v),
        _ => quote_base(sc, &ty, v),
    }
}

fn quote_fun(sc: &Scope, dom: &Val, cod: &Closure, f: &Val) -> Term {
    let (sc1, x) = sc.bind_term(dom.clone());
    let body = quote(&sc1, &cod.apply(&sc1, x.clone()), &do_app(&sc1, f, &x));
    Term::Lam(binder_name(cod.name(), f), rc(body))
}

fn quote_pair(sc: &Scope, dom: &Val, cod: &Closure, p: &Val) -> Term {
    let fst = do_fst(sc, p);
    let snd = do_snd(sc, p);
    let cod_ty = cod.apply(sc, fst.clone());
    Term::Pair(rc(quote(sc, dom, &fst)), rc(quote(sc, &cod_ty, &snd)))
}

fn quote_dfun(sc: &Scope, line: &DimClosure, p: &Val) -> Term {
    let (sc1, i) = sc.bind_dim();
    let body = quote(&sc1, &line.apply(&sc1, i), &do_dapp(&sc1, p, i));
    let name = match &**p {
        Value::DLam(c) => c.name().clone(),
        _ => line.name().clone(),
    };
    Term::DLam(name, rc(body))
}

/// Prefers the binder name of the value itself when it is a λ.
fn binder_name(fallback: &Name, f: &Val) -> Name {
    match &**f {
        Value::Lam(c) => c.name().clone(),
        _ => fallback.clone(),
    }
}

fn quote_base(sc: &Scope, ty: &Val, v: &Val) -> Term {
    let v = whnf(sc, v);
    match &*v {
        Value::Tt => Term::Tt,
        Value::Ff => Term::Ff,
        Value::Neutral(ne, _) => quote_neutral(sc, ne),
        Value::Split(bs) => quote_split(sc, bs, |sc, v| quote(sc, ty, v)),
        Value::Abort => Term::Abort,
        Value::Lam(_) => {
            let (a, b) = unfold_pi(sc, ty).expect("kernel fault: λ at a non-function type");
            quote_fun(sc, &a, &b, &v)
        }
        Value::Pair(..) => {
            let (a, b) = unfold_sg(sc, ty).expect("kernel fault: pair at a non-pair type");
            quote_pair(sc, &a, &b, &v)
        }
        Value::DLam(_) => {
            let (line, ..) = unfold_path(sc, ty).expect("kernel fault: path abstraction at a non-path type");
            quote_dfun(sc, &line, &v)
        }
        other => panic!("kernel fault: cannot read back {other:?} at {ty:?}"),
    }
}

fn quote_split(sc: &Scope, bs: &[(Formula, Thunk)], each: impl Fn(&Scope, &Val) -> Term) -> Term {
    Term::Split(
        bs.iter()
            .map(|(phi, th)| {
                let sc2 = sc.assume(phi);
                let body = if sc2.state.is_inconsistent() {
                    Term::Abort
                } else {
                    each(&sc2, &th.force(&sc2))
                };
                (quote_formula(sc, phi), rc(body))
            })
            .collect(),
    )
}

pub fn quote_type(sc: &Scope, ty: &Val) -> Term {
    if sc.state.is_inconsistent() {
        return Term::Abort;
    }
    let ty = whnf(sc, ty);
    match &*ty {
        Value::Pi(a, b) => {
            let (sc1, x) = sc.bind_term(a.clone());
            Term::Pi(b.name().clone(), rc(quote_type(sc, a)), rc(quote_type(&sc1, &b.apply(&sc1, x))))
        }
        Value::Sg(a, b) => {
            let (sc1, x) = sc.bind_term(a.clone());
            Term::Sg(b.name().clone(), rc(quote_type(sc, a)), rc(quote_type(&sc1, &b.apply(&sc1, x))))
        }
        Value::Path(line, a0, a1) => {
            let (sc1, i) = sc.bind_dim();
            Term::Path {
                line: (line.name().clone(), rc(quote_type(&sc1, &line.apply(&sc1, i)))),
                left: rc(quote(sc, &line.apply(sc, Dim::Zero), a0)),
                right: rc(quote(sc, &line.apply(sc, Dim::One), a1)),
            }
        }
        Value::Bool => Term::Bool,
        Value::Univ => Term::Univ,
        Value::El(c) => Term::El(rc(quote_code(sc, c))),
        Value::Split(bs) => quote_split(sc, bs, quote_type),
        Value::Abort => Term::Abort,
        other => panic!("kernel fault: {other:?} is not a type"),
    }
}

pub fn quote_code(sc: &Scope, v: &Val) -> Term {
    if sc.state.is_inconsistent() {
        return Term::Abort;
    }
    let v = whnf(sc, v);
    match &*v {
        Value::CodePi(a, b) | Value::CodeSg(a, b) => {
            let (sc1, x) = sc.bind_term(el(a));
            let dom = rc(quote_code(sc, a));
            let cod = rc(quote_code(&sc1, &b.apply(&sc1, x)));
            match &*v {
                Value::CodePi(..) => Term::CodePi(b.name().clone(), dom, cod),
                _ => Term::CodeSg(b.name().clone(), dom, cod),
            }
        }
        Value::CodePath(line, a0, a1) => {
            let (sc1, i) = sc.bind_dim();
            Term::CodePath {
                line: (line.name().clone(), rc(quote_code(&sc1, &line.apply(&sc1, i)))),
                left: rc(quote(sc, &el(&line.apply(sc, Dim::Zero)), a0)),
                right: rc(quote(sc, &el(&line.apply(sc, Dim::One)), a1)),
            }
        }
        Value::CodeBool => Term::CodeBool,
        Value::Neutral(ne, _) => quote_neutral(sc, ne),
        Value::Split(bs) => quote_split(sc, bs, quote_code),
        Value::Abort => Term::Abort,
        other => panic!("kernel fault: {other:?} is not a code"),
    }
}

pub fn quote_neutral(sc: &Scope, ne: &Neutral) -> Term {
    let mut t = match &ne.head {
        Head::Var { level, .. } => Term::Var(sc.depth as u32 - 1 - level),
        Head::Coe {
            from,
            to,
            line,
            arg,
        } => {
            let (sci, i) = sc.bind_dim();
            Term::Coe {
                from: quote_dim(sc, *from),
                to: quote_dim(sc, *to),
                line: (line.name().clone(), rc(quote_code(&sci, &line.apply(&sci, i)))),
                arg: rc(quote(sc, &el(&line.apply(sc, *from)), arg)),
            }
        }
        Head::Hcom {
            from,
            to,
            wall,
            code,
            tube,
        } => {
            let (sck, k) = sc.bind_dim();
            let code_t = quote_code(&sck, code);
            let tube_sc = sck.assume(&Formula::eq(k, *from).or(Formula::boundary(*wall)));
            Term::Com {
                from: quote_dim(sc, *from),
                to: quote_dim(sc, *to),
                wall: quote_dim(sc, *wall),
                line: (Name::anon(), rc(code_t)),
                tube: (tube.name().clone(), rc(quote(&tube_sc, &el(code), &tube.apply(&tube_sc, k)))),
            }
        }
    };
    for frame in &ne.spine {
        t = match frame {
            Frame::App { arg, arg_ty } => Term::App(rc(t), rc(quote(sc, arg_ty, arg))),
            Frame::Fst => Term::Fst(rc(t)),
            Frame::Snd => Term::Snd(rc(t)),
            Frame::DApp(r) => Term::DApp(rc(t), quote_dim(sc, *r)),
            Frame::If { motive, tt, ff } => {
                let (sc1, x) = sc.bind_term(Rc::new(Value::Bool));
                Term::If {
                    motive: (motive.name().clone(), rc(quote_type(&sc1, &motive.apply(&sc1, x)))),
                    scrut: rc(t),
                    tt: rc(quote(sc, &motive.apply(sc, Rc::new(Value::Tt)), tt)),
                    ff: rc(quote(sc, &motive.apply(sc, Rc::new(Value::Ff)), ff)),
                }
            }
            Frame::TypeCase {
                motive,
                pi,
                sg,
                path,
                bool,
            } => {
                let (sc1, u) = sc.bind_term(univ());
                let motive_t = quote_type(&sc1, &motive.apply(&sc1, u));
                let branch = |tele: Telescope, body: &MultiClosure| {
                    let ty = motive.apply(&tele.scope, tele.code.clone());
                    quote(&tele.scope, &ty, &body.apply(&tele.scope, &tele.args))
                };
                let names2 = |m: &MultiClosure| [m.names[0].clone(), m.names[1].clone()];
                Term::TypeCase {
                    motive: (motive.name().clone(), rc(motive_t)),
                    scrut: rc(t),
                    pi: (names2(pi), rc(branch(pi_telescope(sc), pi))),
                    sg: (names2(sg), rc(branch(sg_telescope(sc), sg))),
                    path: (
                        std::array::from_fn(|k| path.names[k].clone()),
                        rc(branch(path_telescope(sc), path)),
                    ),
                    bool: rc(quote(sc, &motive.apply(sc, Rc::new(Value::CodeBool)), bool)),
                }
            }
        };
    }
    t
}

/// Generic arguments for one type-case branch: the extended scope, the bound
/// variables and the code they assemble into.
pub struct Telescope {
    pub scope: Scope,
    pub args: Vec<Val>,
    pub code: Val,
}

fn fun_telescope(sc: &Scope, sigma: bool) -> Telescope {
    let (sc1, a) = sc.bind_term(univ());
    let fam_ty = Rc::new(Value::Pi(el(&a), Closure::host("_", |_, _| univ())));
    let (sc2, b) = sc1.bind_term(fam_ty);
    let fam = {
        let b = b.clone();
        Closure::host("x", move |sc, x| do_app(sc, &b, &x))
    };
    let code = if sigma {
        Rc::new(Value::CodeSg(a.clone(), fam))
    } else {
        Rc::new(Value::CodePi(a.clone(), fam))
    };
    Telescope {
        scope: sc2,
        args: vec![a, b],
        code,
    }
}

pub fn pi_telescope(sc: &Scope) -> Telescope {
    fun_telescope(sc, false)
}

pub fn sg_telescope(sc: &Scope) -> Telescope {
    fun_telescope(sc, true)
}

pub fn path_telescope(sc: &Scope) -> Telescope {
    let (sc1, u0) = sc.bind_term(univ());
    let (sc2, u1) = sc1.bind_term(univ());
    let line_ty = Rc::new(Value::Path(DimClosure::constant(univ()), u0.clone(), u1.clone()));
    let (sc3, up) = sc2.bind_term(line_ty);
    let (sc4, x0) = sc3.bind_term(el(&u0));
    let (sc5, x1) = sc4.bind_term(el(&u1));
    let line = {
        let up = up.clone();
        DimClosure::host("i", move |sc, i| do_dapp(sc, &up, i))
    };
    let code = Rc::new(Value::CodePath(line, x0.clone(), x1.clone()));
    Telescope {
        scope: sc5,
        args: vec![u0, u1, up, x0, x1],
        code,
    }
}

/// Normal form of a closed-context term at a type.
pub fn normalize(sc: &Scope, env: &Env, t: &Term, ty: &Val) -> Term {
    let v = eval(sc, env, t);
    quote(sc, ty, &v)
}
