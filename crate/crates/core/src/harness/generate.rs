//! Random closed terms of type `bool`, well-typed by construction.
//!
//! Generation is goal-directed: every production is asked for a term with a
//! given boolean value, so each term comes with the literal it must
//! normalize to. Bound boolean variables carry their values; dimension
//! variables are only ever used where every instance agrees.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generated term together with the value it must normalize to.
#[derive(Clone, Debug)]
pub struct Generated {
    pub seed: u64,
    pub size: usize,
    pub source: String,
    pub expected: bool,
    /// Productions used, outermost first.
    pub trace: Vec<&'static str>,
}

impl Generated {
    /// Did the term coerce along a line that mentions its dimension?
    pub fn has_varying_coe(&self) -> bool {
        self.trace.contains(&"coe-varying")
    }
}

const SYM: &str = "((\\A a b p. <i> hcom 0 1 i A (j. [ j = 0 \\/ i = 1 -> p @ 0 | i = 0 -> p @ j ])) \
    : (A : U) (a b : El A) -> path (_. El A) a b -> path (_. El A) b a)";

const TRANS: &str = "((\\A a b c p q. <i> hcom 0 1 i A (j. [ j = 0 \\/ i = 0 -> p @ i | i = 1 -> q @ j ])) \
    : (A : U) (a b c : El A) -> path (_. El A) a b -> path (_. El A) b c -> path (_. El A) a c)";

const J: &str = "((\\A C a b p c. coe 0 1 (i. C (p @ 0) (p @ i) \
    (<j> hcom 0 j i A (k. [ k = 0 \\/ i = 0 -> p @ 0 | i = 1 -> p @ k ]))) (c (p @ 0))) \
    : (A : U) (C : (x y : El A) -> path (_. El A) x y -> U) (a b : El A) (p : path (_. El A) a b) \
      (c : (x : El A) -> El (C x x (<_> x))) -> El (C a b p))";

/// Productions whose subterms must be convertible with one another.
const CONSTRAINED: [&str; 6] = ["path-app", "coe-path", "hcom-bool", "hcom-composite", "sym-trans", "J"];

struct Gen {
    rng: ChaCha8Rng,
    /// Boolean variables in scope and their values.
    vars: Vec<(String, bool)>,
    /// Dimension variables in scope.
    dims: Vec<String>,
    fresh: usize,
    trace: Vec<&'static str>,
}

fn lit(v: bool) -> &'static str {
    if v {
        "tt"
    } else {
        "ff"
    }
}

impl Gen {
    fn name(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    fn endpoint(&mut self) -> &'static str {
        if self.coin() {
            "0"
        } else {
            "1"
        }
    }

    /// Any dimension in scope, or a constant.
    fn dim(&mut self) -> String {
        let k = self.rng.gen_range(0..self.dims.len() + 2);
        match k {
            0 => "0".into(),
            1 => "1".into(),
            _ => self.dims[k - 2].clone(),
        }
    }

    /// Splits a budget between `n` children.
    fn split(&mut self, size: usize, n: usize) -> Vec<usize> {
        let mut parts = vec![1; n];
        for _ in 0..size.saturating_sub(n) {
            let k = self.rng.gen_range(0..n);
            parts[k] += 1;
        }
        parts
    }

    fn with_var<T>(&mut self, v: bool, f: impl FnOnce(&mut Gen, &str) -> T) -> T {
        let x = self.name("x");
        self.vars.push((x.clone(), v));
        let out = f(self, &x);
        self.vars.pop();
        out
    }

    fn with_dim<T>(&mut self, f: impl FnOnce(&mut Gen, &str) -> T) -> T {
        let i = self.name("i");
        self.dims.push(i.clone());
        let out = f(self, &i);
        self.dims.pop();
        out
    }

    /// Records a coercion whose line mentions its dimension.
    fn note_line(&mut self, i: &str, line: &str) {
        let mentions = line
            .split(|c: char| !(c.is_alphanumeric() || c == '_' || c == '\''))
            .any(|w| w == i);
        if mentions {
            self.trace.push("coe-varying");
        }
    }

    /// A term built without bound boolean variables: positions whose type
    /// demands a convertibility (path endpoints, overlapping walls) cannot
    /// rely on the values the generator assigned to variables, since the
    /// checker treats variables generically.
    fn closed<T>(&mut self, f: impl FnOnce(&mut Gen) -> T) -> T {
        let vars = std::mem::take(&mut self.vars);
        let out = f(self);
        self.vars = vars;
        out
    }

    /// A degenerate boolean that syntactically mentions the dimension `i`.
    fn mention(&mut self, i: &str) -> String {
        let c = lit(self.coin());
        format!("((refl : path (_. bool) {c} {c}) @ {i})")
    }

    /// A closed code that decodes to `bool` at every value of `i`, and whose
    /// text mentions `i`.
    fn bool_line(&mut self, i: &str) -> String {
        let m = self.mention(i);
        match self.rng.gen_range(0..3) {
            0 => format!("(if (_. U) {m} bool^ bool^)"),
            1 => {
                let kind = self.rng.gen_range(0..4);
                let code = self.code_of_kind(kind);
                format!(
                    "(tycase (_. U) (if (_. U) {m} {code} {code}) \
                     {{ pi a b -> bool^ | sg a b -> bool^ | path u0 u1 up w0 w1 -> bool^ | bool -> bool^ }})"
                )
            }
            _ => "bool^".into(),
        }
    }

    /// A small closed code of a given former: 0 pi, 1 sg, 2 path, 3 bool.
    fn code_of_kind(&mut self, kind: usize) -> String {
        match kind {
            0 => "(pi^ bool^ (_. bool^))".into(),
            1 => "(sg^ bool^ (_. bool^))".into(),
            2 => {
                let c = lit(self.coin());
                format!("(path^ (_. bool^) {c} {c})")
            }
            _ => "bool^".into(),
        }
    }

    fn any(&mut self, size: usize) -> String {
        let v = self.coin();
        self.bool_term(v, size)
    }

    pub fn bool_term(&mut self, v: bool, size: usize) -> String {
        if size <= 1 {
            let vars: Vec<String> = self.vars.iter().filter(|(_, w)| *w == v).map(|(x, _)| x.clone()).collect();
            if !vars.is_empty() && self.rng.gen_bool(0.5) {
                self.trace.push("var");
                return vars.choose(&mut self.rng).expect("non-empty").clone();
            }
            self.trace.push("literal");
            return lit(v).into();
        }
        let productions: [(&'static str, u32); 16] = [
            ("if", 3),
            ("beta", 3),
            ("fun-app", 2),
            ("proj", 2),
            ("path-app", 2),
            ("coe-constant", 1),
            ("coe-bool-line", 2),
            ("coe-pi", 2),
            ("coe-sg", 2),
            ("coe-path", 2),
            ("hcom-bool", 2),
            ("hcom-composite", 2),
            ("com", 1),
            ("tycase", 2),
            ("sym-trans", 1),
            ("J", 1),
        ];
        let (production, _) = *productions
            .choose_weighted(&mut self.rng, |p| p.1)
            .expect("non-empty weights");
        self.trace.push(production);
        if CONSTRAINED.contains(&production) {
            self.closed(|g| g.production(production, v, size - 1))
        } else {
            self.production(production, v, size - 1)
        }
    }

    fn production(&mut self, production: &str, v: bool, s: usize) -> String {
        match production {
            "if" => {
                let c = self.coin();
                let p = self.split(s, 3);
                // A motive that depends on the scrutinee only computes when
                // the scrutinee is free of variables.
                let dependent = self.coin();
                let scrut = if dependent {
                    self.closed(|g| g.bool_term(c, p[0]))
                } else {
                    self.bool_term(c, p[0])
                };
                let (t, f) = if c {
                    (self.bool_term(v, p[1]), self.any(p[2]))
                } else {
                    (self.any(p[1]), self.bool_term(v, p[2]))
                };
                let motive = if dependent {
                    let x = self.name("m");
                    format!("({x}. if (_. U) {x} bool^ bool^)")
                } else {
                    "(_. bool)".to_string()
                };
                format!("(if {motive} {scrut} {t} {f})")
            }
            "beta" => {
                let a = self.coin();
                let p = self.split(s, 2);
                let arg = self.bool_term(a, p[0]);
                let (x, body) = self.with_var(a, |g, x| (x.to_string(), g.bool_term(v, p[1])));
                format!("((\\{x}. {body}) {arg})")
            }
            "fun-app" => {
                let a = self.coin();
                let p = self.split(s, 2);
                let arg = self.bool_term(a, p[0]);
                let (x, body) = self.with_var(a, |g, x| (x.to_string(), g.bool_term(v, p[1])));
                format!("(((\\{x}. {body}) : bool -> bool) {arg})")
            }
            "proj" => {
                let p = self.split(s, 2);
                let (dependent, first) = (self.coin(), self.coin());
                let ty = if dependent {
                    let x = self.name("y");
                    format!("(({x} : bool) * if (_. U) {x} bool^ bool^)")
                } else {
                    "bool * bool".to_string()
                };
                // The second component's type depends on the first.
                let component = |g: &mut Gen, v: bool, size: usize, leading: bool| {
                    if dependent && leading {
                        g.closed(|g| g.bool_term(v, size))
                    } else {
                        g.bool_term(v, size)
                    }
                };
                if first {
                    let here = component(self, v, p[0], true);
                    let w = self.coin();
                    let other = component(self, w, p[1], false);
                    format!("(({here}, {other}) : {ty}).1")
                } else {
                    let w = self.coin();
                    let other = component(self, w, p[1], true);
                    let here = component(self, v, p[0], false);
                    format!("(({other}, {here}) : {ty}).2")
                }
            }
            "path-app" => {
                let p = self.split(s, 4);
                let (e0, e1) = (self.bool_term(v, p[0]), self.bool_term(v, p[1]));
                let (i, body) = self.with_dim(|g, i| {
                    let c = g.coin();
                    let m = g.mention(i);
                    let t = g.bool_term(v, p[2]);
                    let f = g.bool_term(v, p[3]);
                    let body = if c {
                        format!("if (_. bool) {m} {t} {f}")
                    } else {
                        format!("if (_. bool) {m} {f} {t}")
                    };
                    (i.to_string(), body)
                });
                let r = self.dim();
                format!("(((<{i}> {body}) : path (_. bool) {e0} {e1}) @ {r})")
            }
            "coe-constant" => {
                let arg = self.bool_term(v, s);
                let (r, r2) = (self.dim(), self.dim());
                format!("(coe {r} {r2} (_. bool^) {arg})")
            }
            "coe-bool-line" => {
                let arg = self.bool_term(v, s);
                let (r, r2) = (self.dim(), self.dim());
                let (i, line) = self.with_dim(|g, i| (i.to_string(), g.bool_line(i)));
                self.note_line(&i, &line);
                format!("(coe {r} {r2} ({i}. {line}) {arg})")
            }
            "coe-pi" => {
                let a = self.coin();
                let p = self.split(s, 2);
                let arg = self.bool_term(a, p[0]);
                let (x, body) = self.with_var(a, |g, x| (x.to_string(), g.bool_term(v, p[1])));
                let (i, dom, cod) = self.with_dim(|g, i| (i.to_string(), g.bool_line(i), g.bool_line(i)));
                self.note_line(&i, &format!("{dom}{cod}"));
                let (r, r2) = (self.dim(), self.dim());
                format!("((coe {r} {r2} ({i}. pi^ {dom} (_. {cod})) (\\{x}. {body})) {arg})")
            }
            "coe-sg" => {
                let p = self.split(s, 2);
                let (here, other) = (self.bool_term(v, p[0]), self.any(p[1]));
                let (i, a, b) = self.with_dim(|g, i| (i.to_string(), g.bool_line(i), g.bool_line(i)));
                let (r, r2) = (self.dim(), self.dim());
                let line = format!("({i}. sg^ {a} (_. {b}))");
                self.note_line(&i, &format!("{a}{b}"));
                if self.coin() {
                    format!("(coe {r} {r2} {line} ({here}, {other})).1")
                } else {
                    format!("(coe {r} {r2} {line} ({other}, {here})).2")
                }
            }
            "coe-path" => {
                let p = self.split(s, 3);
                let (a0, a1, b) = (self.bool_term(v, p[0]), self.bool_term(v, p[1]), self.bool_term(v, p[2]));
                let (i, line) = self.with_dim(|g, i| (i.to_string(), g.bool_line(i)));
                self.note_line(&i, &line);
                let (r, r2) = (self.dim(), self.dim());
                let e = self.dim();
                let j = self.name("j");
                format!("(coe {r} {r2} ({i}. path^ (_. {line}) {a0} {a1}) (<{j}> {b}) @ {e})")
            }
            "hcom-bool" => {
                if self.coin() {
                    let cap = self.bool_term(v, s);
                    let (r, r2) = (self.dim(), self.dim());
                    let (k, tube) = self.with_dim(|g, k| {
                        let m = g.mention(k);
                        (k.to_string(), format!("if (_. bool) {m} {cap} {cap}"))
                    });
                    format!("(hcom {r} {r2} 0 bool^ ({k}. {tube}))")
                } else {
                    // A composition with a genuine wall, under a path
                    // abstraction whose endpoints agree.
                    let p = self.split(s, 4);
                    let e0 = self.bool_term(v, p[0]);
                    let e1 = self.bool_term(v, p[1]);
                    let (j, body) = self.with_dim(|g, j| {
                        let cap = g.bool_term(v, p[2]);
                        let wall = g.bool_term(v, p[3]);
                        let k = g.name("k");
                        (
                            j.to_string(),
                            format!("hcom 0 1 {j} bool^ ({k}. [ {k} = 0 \\/ {j} = 0 -> {cap} | {j} = 1 -> {wall} ])"),
                        )
                    });
                    let r = self.dim();
                    format!("(((<{j}> {body}) : path (_. bool) {e0} {e1}) @ {r})")
                }
            }
            "hcom-composite" => {
                let p = self.split(s, 3);
                let e = self.bool_term(v, p[0]);
                let (j, body) = self.with_dim(|g, j| {
                    let k = g.name("k");
                    let body = if g.coin() {
                        let a = g.coin();
                        let arg = g.bool_term(a, p[1]);
                        let (x, fbody) = g.with_var(a, |g, x| (x.to_string(), g.bool_term(v, p[2])));
                        format!("(hcom 0 1 {j} (pi^ bool^ (_. bool^)) ({k}. \\{x}. {fbody})) {arg}")
                    } else {
                        let (here, other) = (g.bool_term(v, p[1]), g.any(p[2]));
                        format!("(hcom 0 1 {j} (sg^ bool^ (_. bool^)) ({k}. ({here}, {other}))).1")
                    };
                    (j.to_string(), body)
                });
                let r = self.dim();
                format!("(((<{j}> {body}) : path (_. bool) {e} {e}) @ {r})")
            }
            "com" => {
                let cap = self.bool_term(v, s);
                let (i, line) = self.with_dim(|g, i| (i.to_string(), g.bool_line(i)));
                let (r, r2, w) = (self.dim(), self.dim(), self.endpoint());
                let k = self.name("k");
                format!("(com {r} {r2} {w} ({i}. {line}) ({k}. {cap}))")
            }
            "tycase" => {
                let kind = self.rng.gen_range(0..4);
                let code = self.code_of_kind(kind);
                let p = self.split(s, 4);
                let mut bodies = Vec::new();
                for (k, &part) in p.iter().enumerate() {
                    bodies.push(if k == kind { self.bool_term(v, part) } else { self.any(part) });
                }
                format!(
                    "(tycase (_. bool) {code} {{ pi a b -> {} | sg a b -> {} | path u0 u1 up w0 w1 -> {} | bool -> {} }})",
                    bodies[0], bodies[1], bodies[2], bodies[3]
                )
            }
            "sym-trans" => {
                let p = self.split(s, 3);
                let (a, b, c) = (self.bool_term(v, p[0]), self.bool_term(v, p[1]), self.bool_term(v, p[2]));
                let r = self.dim();
                if self.coin() {
                    format!("({SYM} bool^ {a} {b} (refl : path (_. bool) {a} {b}) @ {r})")
                } else {
                    format!(
                        "({TRANS} bool^ {a} {b} {c} (refl : path (_. bool) {a} {b}) (refl : path (_. bool) {b} {c}) @ {r})"
                    )
                }
            }
            "J" => {
                let a = self.coin();
                let p = self.split(s, 3);
                let (e0, e1) = (self.bool_term(a, p[0]), self.bool_term(a, p[1]));
                let (x, body) = self.with_var(a, |g, x| (x.to_string(), g.bool_term(v, p[2])));
                format!(
                    "({J} bool^ (\\x y q. bool^) {e0} {e1} (refl : path (_. bool) {e0} {e1}) (\\{x}. {body}))"
                )
            }
            _ => unreachable!("unknown production"),
        }
    }
}

/// A closed term of type `bool`, determined by `seed` and `size`.
pub fn generate_closed_bool(seed: u64, size: usize) -> Generated {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        vars: Vec::new(),
        dims: Vec::new(),
        fresh: 0,
        trace: Vec::new(),
    };
    let expected = g.coin();
    let source = g.bool_term(expected, size.max(1));
    Generated {
        seed,
        size,
        source,
        expected,
        trace: g.trace,
    }
}
