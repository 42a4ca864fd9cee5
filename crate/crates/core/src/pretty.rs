//! Printing core terms back into surface syntax, inventing fresh names for
//! binders. The output re-parses and re-elaborates to the same core term.

use std::fmt::Write;

use crate::syntax::{free_dimensions, free_variables, Dim, Formula, Name, Term};

/// Names for the free variables of a term, innermost last.
#[derive(Clone, Debug, Default)]
pub struct Names {
    pub terms: Vec<String>,
    pub dims: Vec<String>,
}

impl Names {
    fn taken(&self, s: &str) -> bool {
        self.terms.iter().chain(&self.dims).any(|n| n == s)
    }

    fn fresh(&self, hint: &Name, used: bool) -> String {
        let base = match hint.as_str() {
            "_" | "" if !used => return "_".into(),
            "_" | "" => "x",
            s => s,
        };
        let mut name = base.to_string();
        while self.taken(&name) || crate::surface::is_reserved(&name) {
            name.push('\'');
        }
        name
    }

    fn with_term(&self, x: &str) -> Names {
        let mut n = self.clone();
        n.terms.push(x.into());
        n
    }

    fn with_dim(&self, i: &str) -> Names {
        let mut n = self.clone();
        n.dims.push(i.into());
        n
    }

    fn term(&self, ix: u32) -> String {
        let n = self.terms.len();
        match n.checked_sub(ix as usize + 1) {
            Some(k) => self.terms[k].clone(),
            None => format!("#{ix}"),
        }
    }

    fn dim(&self, r: Dim) -> String {
        match r {
            Dim::Zero => "0".into(),
            Dim::One => "1".into(),
            Dim::Var(ix) => {
                let n = self.dims.len();
                match n.checked_sub(ix as usize + 1) {
                    Some(k) => self.dims[k].clone(),
                    None => format!("#i{ix}"),
                }
            }
        }
    }
}

pub fn term(t: &Term, names: &Names) -> String {
    let mut out = String::new();
    go(&mut out, t, names, 0);
    out
}

pub fn formula(phi: &Formula, names: &Names) -> String {
    let mut out = String::new();
    go_formula(&mut out, phi, names, false);
    out
}

fn go_formula(out: &mut String, phi: &Formula, names: &Names, nested: bool) {
    match phi {
        Formula::Eq(r, s) => {
            let _ = write!(out, "{} = {}", names.dim(*r), names.dim(*s));
        }
        Formula::Or(a, b) => {
            if nested {
                out.push('(');
            }
            go_formula(out, a, names, true);
            out.push_str(" \\/ ");
            go_formula(out, b, names, false);
            if nested {
                out.push(')');
            }
        }
    }
}

fn uses_var(body: &Term) -> bool {
    free_variables(body).contains(&0)
}

fn uses_dim(body: &Term) -> bool {
    free_dimensions(body).contains(&0)
}

/// Levels: 0 binders and arrows, 1 products, 2 `@`, 3 application,
/// 4 arguments.
fn go(out: &mut String, t: &Term, names: &Names, prec: u8) {
    let open = |out: &mut String, needed: u8| {
        if prec > needed {
            out.push('(');
        }
    };
    let close = |out: &mut String, needed: u8| {
        if prec > needed {
            out.push(')');
        }
    };
    // Keyword-headed forms take arguments like applications do.
    let keyword = matches!(
        t,
        Term::If { .. }
            | Term::Coe { .. }
            | Term::Com { .. }
            | Term::Path { .. }
            | Term::CodePath { .. }
            | Term::El(_)
            | Term::CodePi(..)
            | Term::CodeSg(..)
            | Term::TypeCase { .. }
    );
    if keyword {
        open(out, 3);
    }
    match t {
        Term::Var(ix) => out.push_str(&names.term(*ix)),
        Term::Lam(x, b) => {
            open(out, 0);
            let x = names.fresh(x, uses_var(b));
            let _ = write!(out, "\\{x}. ");
            go(out, b, &names.with_term(&x), 0);
            close(out, 0);
        }
        Term::App(f, a) => {
            open(out, 3);
            go(out, f, names, 3);
            out.push(' ');
            go(out, a, names, 4);
            close(out, 3);
        }
        Term::Pair(a, b) => {
            out.push('(');
            go(out, a, names, 0);
            out.push_str(", ");
            go(out, b, names, 0);
            out.push(')');
        }
        Term::Fst(p) | Term::Snd(p) => {
            go(out, p, names, 4);
            out.push_str(if matches!(t, Term::Fst(_)) { ".1" } else { ".2" });
        }
        Term::DLam(i, b) => {
            open(out, 0);
            let i = names.fresh(i, uses_dim(b));
            let _ = write!(out, "<{i}> ");
            go(out, b, &names.with_dim(&i), 0);
            close(out, 0);
        }
        Term::DApp(p, r) => {
            open(out, 2);
            go(out, p, names, 2);
            let _ = write!(out, " @ {}", names.dim(*r));
            close(out, 2);
        }
        Term::Tt => out.push_str("tt"),
        Term::Ff => out.push_str("ff"),
        Term::If {
            motive,
            scrut,
            tt,
            ff,
        } => {
            out.push_str("if ");
            bound_term(out, motive, names);
            for arg in [scrut, tt, ff] {
                out.push(' ');
                go(out, arg, names, 4);
            }
        }
        Term::Abort => out.push_str("abort"),
        Term::Split(bs) => {
            out.push('[');
            for (k, (phi, b)) in bs.iter().enumerate() {
                if k > 0 {
                    out.push_str(" | ");
                }
                go_formula(out, phi, names, false);
                out.push_str(" -> ");
                go(out, b, names, 0);
            }
            out.push(']');
        }
        Term::Coe {
            from,
            to,
            line,
            arg,
        } => {
            let _ = write!(out, "coe {} {} ", names.dim(*from), names.dim(*to));
            bound_dim(out, line, names);
            out.push(' ');
            go(out, arg, names, 4);
        }
        Term::Com {
            from,
            to,
            wall,
            line,
            tube,
        } => {
            let _ = write!(
                out,
                "com {} {} {} ",
                names.dim(*from),
                names.dim(*to),
                names.dim(*wall)
            );
            bound_dim(out, line, names);
            out.push(' ');
            bound_dim(out, tube, names);
        }
        Term::Pi(x, a, b) | Term::Sg(x, a, b) => {
            let is_pi = matches!(t, Term::Pi(..));
            let level = if is_pi { 0 } else { 1 };
            open(out, level);
            if uses_var(b) {
                let x = names.fresh(x, true);
                let _ = write!(out, "({x} : ");
                go(out, a, names, 0);
                out.push(')');
                out.push_str(if is_pi { " -> " } else { " * " });
                go(out, b, &names.with_term(&x), level);
            } else {
                go(out, a, names, level + 1);
                out.push_str(if is_pi { " -> " } else { " * " });
                go(out, b, &names.with_term("_"), level);
            }
            close(out, level);
        }
        Term::Path { line, left, right } | Term::CodePath { line, left, right } => {
            out.push_str(if matches!(t, Term::Path { .. }) { "path " } else { "path^ " });
            bound_dim(out, line, names);
            out.push(' ');
            go(out, left, names, 4);
            out.push(' ');
            go(out, right, names, 4);
        }
        Term::Bool => out.push_str("bool"),
        Term::Univ => out.push('U'),
        Term::El(c) => {
            out.push_str("El ");
            go(out, c, names, 4);
        }
        Term::CodePi(x, a, b) | Term::CodeSg(x, a, b) => {
            out.push_str(if matches!(t, Term::CodePi(..)) { "pi^ " } else { "sg^ " });
            go(out, a, names, 4);
            out.push(' ');
            bound_term(out, &(x.clone(), b.clone()), names);
        }
        Term::CodeBool => out.push_str("bool^"),
        Term::TypeCase {
            motive,
            scrut,
            pi,
            sg,
            path,
            bool,
        } => {
            out.push_str("tycase ");
            bound_term(out, motive, names);
            out.push(' ');
            go(out, scrut, names, 4);
            out.push_str(" { ");
            branch(out, "pi", &pi.0, &pi.1, names);
            out.push_str(" | ");
            branch(out, "sg", &sg.0, &sg.1, names);
            out.push_str(" | ");
            branch(out, "path", &path.0, &path.1, names);
            out.push_str(" | bool -> ");
            go(out, bool, names, 0);
            out.push_str(" }");
        }
    }
    if keyword {
        close(out, 3);
    }
}

fn bound_term(out: &mut String, (x, body): &(Name, crate::syntax::RcTerm), names: &Names) {
    let x = names.fresh(x, true);
    let _ = write!(out, "({x}. ");
    go(out, body, &names.with_term(&x), 0);
    out.push(')');
}

fn bound_dim(out: &mut String, (i, body): &(Name, crate::syntax::RcTerm), names: &Names) {
    let i = names.fresh(i, true);
    let _ = write!(out, "({i}. ");
    go(out, body, &names.with_dim(&i), 0);
    out.push(')');
}

fn branch(out: &mut String, head: &str, binders: &[Name], body: &Term, names: &Names) {
    let mut inner = names.clone();
    out.push_str(head);
    for x in binders {
        let x = inner.fresh(x, true);
        let _ = write!(out, " {x}");
        inner = inner.with_term(&x);
    }
    out.push_str(" -> ");
    go(out, body, &inner, 0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::rc::Rc;

    #[test]
    fn shadowed_names_get_primes() {
        let t = Term::Lam(
            Name::new("x"),
            Rc::new(Term::Lam(Name::new("x"), Rc::new(Term::Var(1)))),
        );
        assert_eq!(term(&t, &Names::default()), "\\x. \\x'. x");
    }

    #[test]
    fn arrows_and_products() {
        let t = Term::Pi(
            Name::new("x"),
            Rc::new(Term::Sg(Name::anon(), Rc::new(Term::Bool), Rc::new(Term::Bool))),
            Rc::new(Term::Bool),
        );
        assert_eq!(term(&t, &Names::default()), "bool * bool -> bool");
    }
}
