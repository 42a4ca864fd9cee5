//! Semantic values for normalization by evaluation.
//!
//! Values are in weak-head normal form relative to the face assumptions that
//! were in force when they were built. Those assumptions are not captured:
//! every semantic operation receives the ambient [`Scope`], and stuck values
//! are re-forced by [`crate::eval::whnf`] when inspected under a stronger one.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::face::SolverState;
use crate::syntax::{Dim, Formula, Name, RcTerm, Term};

pub type Val = Rc<Value>;

pub enum Value {
    Lam(Closure),
    Pair(Val, Val),
    DLam(DimClosure),
    Tt,
    Ff,
    Pi(Val, Closure),
    Sg(Val, Closure),
    Path(DimClosure, Val, Val),
    Bool,
    Univ,
    /// Decoding of a code that is not (yet) a code former.
    El(Val),
    CodePi(Val, Closure),
    CodeSg(Val, Closure),
    CodePath(DimClosure, Val, Val),
    CodeBool,
    Neutral(Rc<Neutral>, Val),
    /// A partial element none of whose formulas is entailed yet.
    Split(Vec<(Formula, Thunk)>),
    /// The unique element under an inconsistent state.
    Abort,
}

impl Value {
    pub fn var(level: u32, ty: Val) -> Val {
        Rc::new(Value::Neutral(
            Rc::new(Neutral {
                head: Head::Var {
                    level,
                    ty: ty.clone(),
                },
                spine: Vec::new(),
            }),
            ty,
        ))
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Lam(_) => write!(f, "Lam(..)"),
            Value::Pair(a, b) => write!(f, "Pair({a:?}, {b:?})"),
            Value::DLam(_) => write!(f, "DLam(..)"),
            Value::Tt => write!(f, "Tt"),
            Value::Ff => write!(f, "Ff"),
            Value::Pi(a, _) => write!(f, "Pi({a:?}, ..)"),
            Value::Sg(a, _) => write!(f, "Sg({a:?}, ..)"),
            Value::Path(_, a, b) => write!(f, "Path(.., {a:?}, {b:?})"),
            Value::Bool => write!(f, "Bool"),
            Value::Univ => write!(f, "Univ"),
            Value::El(c) => write!(f, "El({c:?})"),
            Value::CodePi(a, _) => write!(f, "CodePi({a:?}, ..)"),
            Value::CodeSg(a, _) => write!(f, "CodeSg({a:?}, ..)"),
            Value::CodePath(_, a, b) => write!(f, "CodePath(.., {a:?}, {b:?})"),
            Value::CodeBool => write!(f, "CodeBool"),
            Value::Neutral(ne, _) => write!(f, "Neutral({ne:?})"),
            Value::Split(bs) => {
                let fs: Vec<_> = bs.iter().map(|(phi, _)| phi).collect();
                write!(f, "Split({fs:?})")
            }
            Value::Abort => write!(f, "Abort"),
        }
    }
}

/// Values for the free variables of a term: term variables and dimension
/// variables, each indexed from the end.
#[derive(Clone, Default)]
pub struct Env {
    pub terms: Vec<Val>,
    pub dims: Vec<Dim>,
}

impl Env {
    pub fn term(&self, ix: u32) -> Val {
        let n = self.terms.len();
        assert!((ix as usize) < n, "scoping fault: term index {ix} out of range");
        self.terms[n - 1 - ix as usize].clone()
    }

    pub fn dim(&self, r: Dim) -> Dim {
        match r {
            Dim::Var(ix) => {
                let n = self.dims.len();
                assert!((ix as usize) < n, "scoping fault: dimension index {ix} out of range");
                self.dims[n - 1 - ix as usize]
            }
            c => c,
        }
    }

    pub fn formula(&self, phi: &Formula) -> Formula {
        phi.map_dims(&mut |r| self.dim(r))
    }

    pub fn push_term(&self, v: Val) -> Env {
        let mut env = self.clone();
        env.terms.push(v);
        env
    }

    pub fn push_dim(&self, r: Dim) -> Env {
        let mut env = self.clone();
        env.dims.push(r);
        env
    }
}

type HostFn = Rc<dyn Fn(&Scope, Val) -> Val>;
type HostDimFn = Rc<dyn Fn(&Scope, Dim) -> Val>;

/// A term-variable binder: either a core body awaiting one value, or a
/// function built by the evaluator itself.
#[derive(Clone)]
pub enum Closure {
    Term { name: Name, env: Env, body: RcTerm },
    Host { name: Name, run: HostFn },
}

impl Closure {
    pub fn host(name: &str, run: impl Fn(&Scope, Val) -> Val + 'static) -> Closure {
        Closure::Host {
            name: Name::new(name),
            run: Rc::new(run),
        }
    }

    pub fn name(&self) -> &Name {
        match self {
            Closure::Term { name, .. } | Closure::Host { name, .. } => name,
        }
    }

    pub fn apply(&self, sc: &Scope, v: Val) -> Val {
        match self {
            Closure::Term { env, body, .. } => crate::eval::eval(sc, &env.push_term(v), body),
            Closure::Host { run, .. } => run(sc, v),
        }
    }
}

/// A dimension binder.
#[derive(Clone)]
pub enum DimClosure {
    Term { name: Name, env: Env, body: RcTerm },
    Host { name: Name, run: HostDimFn },
}

impl DimClosure {
    pub fn host(name: &str, run: impl Fn(&Scope, Dim) -> Val + 'static) -> DimClosure {
        DimClosure::Host {
            name: Name::new(name),
            run: Rc::new(run),
        }
    }

    pub fn constant(v: Val) -> DimClosure {
        DimClosure::host("_", move |_, _| v.clone())
    }

    pub fn name(&self) -> &Name {
        match self {
            DimClosure::Term { name, .. } | DimClosure::Host { name, .. } => name,
        }
    }

    pub fn apply(&self, sc: &Scope, r: Dim) -> Val {
        match self {
            DimClosure::Term { env, body, .. } => crate::eval::eval(sc, &env.push_dim(r), body),
            DimClosure::Host { run, .. } => run(sc, r),
        }
    }
}

/// A core body under several term binders (typecase branches).
#[derive(Clone)]
pub struct MultiClosure {
    pub names: Vec<Name>,
    pub env: Env,
    pub body: RcTerm,
}

impl MultiClosure {
    pub fn apply(&self, sc: &Scope, args: &[Val]) -> Val {
        let mut env = self.env.clone();
        env.terms.extend(args.iter().cloned());
        crate::eval::eval(sc, &env, &self.body)
    }
}

/// A suspended branch of a partial element, forced only under a scope that
/// entails its formula.
#[derive(Clone)]
pub struct Thunk(Rc<dyn Fn(&Scope) -> Val>);

impl Thunk {
    pub fn new(run: impl Fn(&Scope) -> Val + 'static) -> Thunk {
        Thunk(Rc::new(run))
    }

    pub fn of_term(env: Env, body: RcTerm) -> Thunk {
        Thunk::new(move |sc| crate::eval::eval(sc, &env, &body))
    }

    pub fn force(&self, sc: &Scope) -> Val {
        (self.0)(sc)
    }
}

#[derive(Clone)]
pub struct Neutral {
    pub head: Head,
    pub spine: Vec<Frame>,
}

impl fmt::Debug for Neutral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Var { level, .. } => write!(f, "#{level}")?,
            Head::Coe { from, to, .. } => write!(f, "coe {from:?} {to:?} ..")?,
            Head::Hcom { from, to, wall, .. } => write!(f, "hcom {from:?} {to:?} {wall:?} ..")?,
        }
        for frame in &self.spine {
            match frame {
                Frame::App { .. } => write!(f, " (app ..)")?,
                Frame::Fst => write!(f, ".1")?,
                Frame::Snd => write!(f, ".2")?,
                Frame::DApp(r) => write!(f, " @ {r:?}")?,
                Frame::If { .. } => write!(f, " (if ..)")?,
                Frame::TypeCase { .. } => write!(f, " (tycase ..)")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone)]
pub enum Head {
    Var {
        level: u32,
        ty: Val,
    },
    /// Coercion along a line whose code is stuck at a generic dimension.
    Coe {
        from: Dim,
        to: Dim,
        line: DimClosure,
        arg: Val,
    },
    /// Homogeneous composition at a stuck code.
    Hcom {
        from: Dim,
        to: Dim,
        wall: Dim,
        code: Val,
        tube: DimClosure,
    },
}

#[derive(Clone)]
pub enum Frame {
    App {
        arg: Val,
        arg_ty: Val,
    },
    Fst,
    Snd,
    DApp(Dim),
    If {
        motive: Closure,
        tt: Val,
        ff: Val,
    },
    TypeCase {
        motive: Closure,
        pi: MultiClosure,
        sg: MultiClosure,
        path: MultiClosure,
        bool: Val,
    },
}

/// Where a conversion diagnostic came from.
#[derive(Clone, Debug)]
pub struct Mismatch {
    /// The solver branch and binder depth the sides were quoted under.
    pub state: Rc<SolverState>,
    pub terms: usize,
    pub left: Term,
    pub right: Term,
}

pub type MemoKey = (Vec<Vec<u32>>, usize, Term, Term, Term);

/// State shared by every scope of one checking session: the splitting
/// budget, the conversion memo table and diagnostics.
pub struct Session {
    pub max_splits: usize,
    pub memo: RefCell<HashMap<MemoKey, bool>>,
    pub exhausted: Cell<bool>,
    pub splits_taken: Cell<usize>,
    pub quiet: Cell<usize>,
    pub mismatch: RefCell<Option<Mismatch>>,
}

pub const DEFAULT_MAX_SPLITS: usize = 12;

impl Session {
    pub fn new(max_splits: usize) -> Rc<Session> {
        Rc::new(Session {
            max_splits,
            memo: RefCell::new(HashMap::new()),
            exhausted: Cell::new(false),
            splits_taken: Cell::new(0),
            quiet: Cell::new(0),
            mismatch: RefCell::new(None),
        })
    }

    /// Clears the per-query diagnostics.
    pub fn reset_diagnostics(&self) {
        self.exhausted.set(false);
        *self.mismatch.borrow_mut() = None;
    }

    /// Runs `f` without recording mismatches (internal conversion queries).
    pub fn quietly<T>(&self, f: impl FnOnce() -> T) -> T {
        self.quiet.set(self.quiet.get() + 1);
        let out = f();
        self.quiet.set(self.quiet.get() - 1);
        out
    }
}

impl Default for Session {
    fn default() -> Session {
        Rc::try_unwrap(Session::new(DEFAULT_MAX_SPLITS)).ok().unwrap()
    }
}

/// The ambient data every semantic operation needs: face assumptions (which
/// also fix the number of dimension variables), the number of term
/// variables, and how many boundary splits the current conversion has taken.
#[derive(Clone)]
pub struct Scope {
    pub state: Rc<SolverState>,
    pub depth: usize,
    pub splits: usize,
    pub session: Rc<Session>,
}

impl Scope {
    pub fn new(session: Rc<Session>) -> Scope {
        Scope {
            state: Rc::new(SolverState::new(0)),
            depth: 0,
            splits: 0,
            session,
        }
    }

    pub fn dims(&self) -> usize {
        self.state.dims()
    }

    /// A fresh term variable of type `ty` and the scope containing it.
    pub fn bind_term(&self, ty: Val) -> (Scope, Val) {
        let var = Value::var(self.depth as u32, ty);
        let mut sc = self.clone();
        sc.depth += 1;
        (sc, var)
    }

    /// A fresh dimension variable and the scope containing it.
    pub fn bind_dim(&self) -> (Scope, Dim) {
        let r = Dim::Var(self.dims() as u32);
        let mut sc = self.clone();
        sc.state = Rc::new(self.state.bind_dim());
        (sc, r)
    }

    pub fn assume(&self, phi: &Formula) -> Scope {
        let mut sc = self.clone();
        sc.state = Rc::new(self.state.assume(phi));
        sc
    }

    pub fn with_state(&self, state: SolverState) -> Scope {
        let mut sc = self.clone();
        sc.state = Rc::new(state);
        sc
    }

    pub fn entails(&self, phi: &Formula) -> bool {
        self.state.entails(phi)
    }

    pub fn holds(&self, r: Dim, s: Dim) -> bool {
        self.state.holds(r, s)
    }
}
