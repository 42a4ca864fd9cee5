//! The `emit-core` format: core terms in parenthesized prefix notation.
//!
//! Variables are de Bruijn indices, `(var n)` for terms and `#n` for
//! dimensions; binder names are kept as hints (`_` when unused).
//!
//! ```text
//! t ::= (var n) | (lam x t) | (app t t) | (pair t t) | (fst t) | (snd t)
//!     | (dlam i t) | (dapp t r) | tt | ff | (if (x t) t t t) | abort
//!     | (split (phi t) ...) | (coe r r (i t) t) | (com r r r (i t) (k t))
//!     | (pi x t t) | (sg x t t) | (path (i t) t t) | bool | U | (el t)
//!     | (pi^ x t t) | (sg^ x t t) | (path^ (i t) t t) | bool^
//!     | (tycase (x t) t (pi (a b) t) (sg (a b) t)
//!               (path (u0 u1 up x0 x1) t) (bool t))
//! r ::= 0 | 1 | #n
//! phi ::= (= r r) | (or phi phi)
//! ```
//!
//! A checked declaration is one line, `(kind name type term)`, with kind
//! `def`, `check` or `normalize`.

use std::fmt::Write;
use std::rc::Rc;

use crate::diag::{Code, Diagnostic, Result, Span};
use crate::syntax::{Dim, Formula, Name, RcTerm, Term};

pub fn emit(t: &Term) -> String {
    let mut out = String::new();
    term(&mut out, t);
    out
}

pub fn emit_decl(kind: &str, name: &str, ty: &Term, t: &Term) -> String {
    let mut out = format!("({kind} {name} ");
    term(&mut out, ty);
    out.push(' ');
    term(&mut out, t);
    out.push(')');
    out
}

fn dim(out: &mut String, r: Dim) {
    let _ = match r {
        Dim::Zero => write!(out, "0"),
        Dim::One => write!(out, "1"),
        Dim::Var(ix) => write!(out, "#{ix}"),
    };
}

fn formula(out: &mut String, phi: &Formula) {
    match phi {
        Formula::Eq(r, s) => {
            out.push_str("(= ");
            dim(out, *r);
            out.push(' ');
            dim(out, *s);
            out.push(')');
        }
        Formula::Or(a, b) => {
            out.push_str("(or ");
            formula(out, a);
            out.push(' ');
            formula(out, b);
            out.push(')');
        }
    }
}

fn name(out: &mut String, x: &Name) {
    let s = x.as_str();
    out.push_str(if s.is_empty() { "_" } else { s });
}

fn bound(out: &mut String, (x, t): &(Name, RcTerm)) {
    out.push('(');
    name(out, x);
    out.push(' ');
    term(out, t);
    out.push(')');
}

fn node(out: &mut String, head: &str, parts: &[&dyn Fn(&mut String)]) {
    out.push('(');
    out.push_str(head);
    for p in parts {
        out.push(' ');
        p(out);
    }
    out.push(')');
}

fn term(out: &mut String, t: &Term) {
    match t {
        Term::Var(ix) => {
            let _ = write!(out, "(var {ix})");
        }
        Term::Lam(x, b) => node(out, "lam", &[&|o| name(o, x), &|o| term(o, b)]),
        Term::App(f, a) => node(out, "app", &[&|o| term(o, f), &|o| term(o, a)]),
        Term::Pair(a, b) => node(out, "pair", &[&|o| term(o, a), &|o| term(o, b)]),
        Term::Fst(p) => node(out, "fst", &[&|o| term(o, p)]),
        Term::Snd(p) => node(out, "snd", &[&|o| term(o, p)]),
        Term::DLam(i, b) => node(out, "dlam", &[&|o| name(o, i), &|o| term(o, b)]),
        Term::DApp(p, r) => node(out, "dapp", &[&|o| term(o, p), &|o| dim(o, *r)]),
        Term::Tt => out.push_str("tt"),
        Term::Ff => out.push_str("ff"),
        Term::If {
            motive,
            scrut,
            tt,
            ff,
        } => node(
            out,
            "if",
            &[&|o| bound(o, motive), &|o| term(o, scrut), &|o| term(o, tt), &|o| term(o, ff)],
        ),
        Term::Abort => out.push_str("abort"),
        Term::Split(bs) => {
            out.push_str("(split");
            for (phi, b) in bs {
                out.push_str(" (");
                formula(out, phi);
                out.push(' ');
                term(out, b);
                out.push(')');
            }
            out.push(')');
        }
        Term::Coe {
            from,
            to,
            line,
            arg,
        } => node(
            out,
            "coe",
            &[&|o| dim(o, *from), &|o| dim(o, *to), &|o| bound(o, line), &|o| term(o, arg)],
        ),
        Term::Com {
            from,
            to,
            wall,
            line,
            tube,
        } => node(
            out,
            "com",
            &[
                &|o| dim(o, *from),
                &|o| dim(o, *to),
                &|o| dim(o, *wall),
                &|o| bound(o, line),
                &|o| bound(o, tube),
            ],
        ),
        Term::Pi(x, a, b) | Term::Sg(x, a, b) | Term::CodePi(x, a, b) | Term::CodeSg(x, a, b) => {
            let head = match t {
                Term::Pi(..) => "pi",
                Term::Sg(..) => "sg",
                Term::CodePi(..) => "pi^",
                _ => "sg^",
            };
            node(out, head, &[&|o| name(o, x), &|o| term(o, a), &|o| term(o, b)])
        }
        Term::Path { line, left, right } | Term::CodePath { line, left, right } => {
            let head = if matches!(t, Term::Path { .. }) { "path" } else { "path^" };
            node(out, head, &[&|o| bound(o, line), &|o| term(o, left), &|o| term(o, right)])
        }
        Term::Bool => out.push_str("bool"),
        Term::Univ => out.push('U'),
        Term::El(c) => node(out, "el", &[&|o| term(o, c)]),
        Term::CodeBool => out.push_str("bool^"),
        Term::TypeCase {
            motive,
            scrut,
            pi,
            sg,
            path,
            bool,
        } => {
            let branch = |o: &mut String, head: &str, names: &[Name], body: &Term| {
                let _ = write!(o, "({head} (");
                for (k, x) in names.iter().enumerate() {
                    if k > 0 {
                        o.push(' ');
                    }
                    name(o, x);
                }
                o.push_str(") ");
                term(o, body);
                o.push(')');
            };
            node(
                out,
                "tycase",
                &[
                    &|o| bound(o, motive),
                    &|o| term(o, scrut),
                    &|o| branch(o, "pi", &pi.0, &pi.1),
                    &|o| branch(o, "sg", &sg.0, &sg.1),
                    &|o| branch(o, "path", &path.0, &path.1),
                    &|o| {
                        o.push_str("(bool ");
                        term(o, bool);
                        o.push(')');
                    },
                ],
            )
        }
    }
}

// -- reading --------------------------------------------------------------------

#[derive(Debug)]
enum Sexp {
    Atom(String, Span),
    List(Vec<Sexp>, Span),
}

impl Sexp {
    fn span(&self) -> Span {
        match self {
            Sexp::Atom(_, s) | Sexp::List(_, s) => *s,
        }
    }
}

fn read(src: &str) -> Result<Sexp> {
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(Vec::new(), 0)];
    let mut chars = src.char_indices().peekable();
    while let Some((at, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => stack.push((Vec::new(), at)),
            ')' => {
                if stack.len() == 1 {
                    return Err(Diagnostic::new(Code::Syntax, Span::new(at, at + 1), "unbalanced `)`"));
                }
                let (items, start) = stack.pop().expect("open list");
                stack.last_mut().expect("parent list").0.push(Sexp::List(items, Span::new(start, at + 1)));
            }
            _ => {
                let mut end = at + c.len_utf8();
                while let Some(&(k, d)) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' {
                        break;
                    }
                    end = k + d.len_utf8();
                    chars.next();
                }
                stack
                    .last_mut()
                    .expect("non-empty stack")
                    .0
                    .push(Sexp::Atom(src[at..end].to_string(), Span::new(at, end)));
            }
        }
    }
    if stack.len() != 1 {
        let start = stack.last().map_or(0, |s| s.1);
        return Err(Diagnostic::new(Code::Syntax, Span::new(start, src.len()), "unclosed `(`"));
    }
    let mut top = stack.pop().expect("top level").0;
    match top.len() {
        1 => Ok(top.pop().expect("one item")),
        0 => Err(Diagnostic::new(Code::Syntax, Span::new(0, src.len()), "empty input")),
        _ => Err(Diagnostic::new(Code::Syntax, top[1].span(), "trailing input after a term")),
    }
}

fn bad(s: &Sexp, what: &str) -> Diagnostic {
    Diagnostic::new(Code::Syntax, s.span(), format!("expected {what}"))
}

fn parse_name(s: &Sexp) -> Result<Name> {
    match s {
        Sexp::Atom(x, _) => Ok(Name::new(x)),
        _ => Err(bad(s, "a binder name")),
    }
}

fn parse_dim(s: &Sexp) -> Result<Dim> {
    match s {
        Sexp::Atom(x, _) if x == "0" => Ok(Dim::Zero),
        Sexp::Atom(x, _) if x == "1" => Ok(Dim::One),
        Sexp::Atom(x, _) => x
            .strip_prefix('#')
            .and_then(|n| n.parse().ok())
            .map(Dim::Var)
            .ok_or_else(|| bad(s, "a dimension (`0`, `1` or `#n`)")),
        _ => Err(bad(s, "a dimension (`0`, `1` or `#n`)")),
    }
}

fn parse_formula(s: &Sexp) -> Result<Formula> {
    match s {
        Sexp::List(items, _) => match items.as_slice() {
            [Sexp::Atom(h, _), r, r2] if h == "=" => Ok(Formula::eq(parse_dim(r)?, parse_dim(r2)?)),
            [Sexp::Atom(h, _), a, b] if h == "or" => Ok(parse_formula(a)?.or(parse_formula(b)?)),
            _ => Err(bad(s, "a formula `(= r s)` or `(or phi psi)`")),
        },
        _ => Err(bad(s, "a formula `(= r s)` or `(or phi psi)`")),
    }
}

fn parse_bound(s: &Sexp) -> Result<(Name, RcTerm)> {
    match s {
        Sexp::List(items, _) if items.len() == 2 => Ok((parse_name(&items[0])?, parse_rc(&items[1])?)),
        _ => Err(bad(s, "a binder `(x t)`")),
    }
}

fn parse_branch<const N: usize>(s: &Sexp, head: &str) -> Result<([Name; N], RcTerm)> {
    let what = format!("a `{head}` branch with {N} binders");
    let Sexp::List(items, _) = s else {
        return Err(bad(s, &what));
    };
    match items.as_slice() {
        [Sexp::Atom(h, _), Sexp::List(names, _), body] if h == head && names.len() == N => {
            let names: Vec<Name> = names.iter().map(parse_name).collect::<Result<_>>()?;
            let names: [Name; N] = names.try_into().map_err(|_| bad(s, &what))?;
            Ok((names, parse_rc(body)?))
        }
        _ => Err(bad(s, &what)),
    }
}

fn parse_rc(s: &Sexp) -> Result<RcTerm> {
    parse_term(s).map(Rc::new)
}

fn parse_term(s: &Sexp) -> Result<Term> {
    let items = match s {
        Sexp::Atom(x, _) => {
            return match x.as_str() {
                "tt" => Ok(Term::Tt),
                "ff" => Ok(Term::Ff),
                "abort" => Ok(Term::Abort),
                "bool" => Ok(Term::Bool),
                "U" => Ok(Term::Univ),
                "bool^" => Ok(Term::CodeBool),
                _ => Err(bad(s, "a term")),
            }
        }
        Sexp::List(items, _) => items,
    };
    let Some(Sexp::Atom(head, _)) = items.first() else {
        return Err(bad(s, "a term headed by a keyword"));
    };
    let args = &items[1..];
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad(s, &format!("`{head}` with {n} arguments")))
        }
    };
    let t = match head.as_str() {
        "var" => {
            arity(1)?;
            match &args[0] {
                Sexp::Atom(n, _) => Term::Var(n.parse().map_err(|_| bad(&args[0], "an index"))?),
                other => return Err(bad(other, "an index")),
            }
        }
        "lam" | "dlam" => {
            arity(2)?;
            let (x, b) = (parse_name(&args[0])?, parse_rc(&args[1])?);
            if head == "lam" {
                Term::Lam(x, b)
            } else {
                Term::DLam(x, b)
            }
        }
        "app" | "pair" => {
            arity(2)?;
            let (a, b) = (parse_rc(&args[0])?, parse_rc(&args[1])?);
            if head == "app" {
                Term::App(a, b)
            } else {
                Term::Pair(a, b)
            }
        }
        "fst" | "snd" | "el" => {
            arity(1)?;
            let p = parse_rc(&args[0])?;
            match head.as_str() {
                "fst" => Term::Fst(p),
                "snd" => Term::Snd(p),
                _ => Term::El(p),
            }
        }
        "dapp" => {
            arity(2)?;
            Term::DApp(parse_rc(&args[0])?, parse_dim(&args[1])?)
        }
        "if" => {
            arity(4)?;
            Term::If {
                motive: parse_bound(&args[0])?,
                scrut: parse_rc(&args[1])?,
                tt: parse_rc(&args[2])?,
                ff: parse_rc(&args[3])?,
            }
        }
        "split" => {
            if args.is_empty() {
                return Err(bad(s, "a split with at least one branch"));
            }
            let branches = args
                .iter()
                .map(|b| match b {
                    Sexp::List(pair, _) if pair.len() == 2 => Ok((parse_formula(&pair[0])?, parse_rc(&pair[1])?)),
                    _ => Err(bad(b, "a branch `(phi t)`")),
                })
                .collect::<Result<_>>()?;
            Term::Split(branches)
        }
        "coe" => {
            arity(4)?;
            Term::Coe {
                from: parse_dim(&args[0])?,
                to: parse_dim(&args[1])?,
                line: parse_bound(&args[2])?,
                arg: parse_rc(&args[3])?,
            }
        }
        "com" => {
            arity(5)?;
            Term::Com {
                from: parse_dim(&args[0])?,
                to: parse_dim(&args[1])?,
                wall: parse_dim(&args[2])?,
                line: parse_bound(&args[3])?,
                tube: parse_bound(&args[4])?,
            }
        }
        "pi" | "sg" | "pi^" | "sg^" => {
            arity(3)?;
            let (x, a, b) = (parse_name(&args[0])?, parse_rc(&args[1])?, parse_rc(&args[2])?);
            match head.as_str() {
                "pi" => Term::Pi(x, a, b),
                "sg" => Term::Sg(x, a, b),
                "pi^" => Term::CodePi(x, a, b),
                _ => Term::CodeSg(x, a, b),
            }
        }
        "path" | "path^" => {
            arity(3)?;
            let (line, left, right) = (parse_bound(&args[0])?, parse_rc(&args[1])?, parse_rc(&args[2])?);
            if head == "path" {
                Term::Path { line, left, right }
            } else {
                Term::CodePath { line, left, right }
            }
        }
        "tycase" => {
            arity(6)?;
            let bool = match &args[5] {
                Sexp::List(b, _) if b.len() == 2 && matches!(&b[0], Sexp::Atom(h, _) if h == "bool") => {
                    parse_rc(&b[1])?
                }
                other => return Err(bad(other, "a `bool` branch")),
            };
            Term::TypeCase {
                motive: parse_bound(&args[0])?,
                scrut: parse_rc(&args[1])?,
                pi: parse_branch(&args[2], "pi")?,
                sg: parse_branch(&args[3], "sg")?,
                path: parse_branch(&args[4], "path")?,
                bool,
            }
        }
        _ => return Err(bad(s, "a term")),
    };
    Ok(t)
}

/// Reads a term written by [`emit`].
pub fn parse(src: &str) -> Result<Term> {
    parse_term(&read(src)?)
}

/// Reads a line written by [`emit_decl`]: kind, name, type and term.
pub fn parse_decl(src: &str) -> Result<(String, String, Term, Term)> {
    let s = read(src)?;
    match &s {
        Sexp::List(items, _) => match items.as_slice() {
            [Sexp::Atom(kind, _), Sexp::Atom(name, _), ty, t] => {
                Ok((kind.clone(), name.clone(), parse_term(ty)?, parse_term(t)?))
            }
            _ => Err(bad(&s, "`(kind name type term)`")),
        },
        _ => Err(bad(&s, "`(kind name type term)`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_round_trip() {
        let line = emit_decl("def", "not", &Term::Pi(Name::anon(), Rc::new(Term::Bool), Rc::new(Term::Bool)), &Term::Tt);
        let (kind, name, ty, t) = parse_decl(&line).unwrap();
        assert_eq!((kind.as_str(), name.as_str(), t), ("def", "not", Term::Tt));
        assert_eq!(emit(&ty), "(pi _ bool bool)");
    }

    #[test]
    fn round_trips_a_composition() {
        let src = "(dlam i (com 0 1 #0 (_ bool^) (j (split ((or (= #0 0) (= #1 1)) tt) ((= #1 0) ff)))))";
        let t = parse(src).unwrap();
        assert_eq!(emit(&t), src);
    }

    #[test]
    fn rejects_unbalanced_input() {
        assert_eq!(parse("(lam x (var 0)").unwrap_err().code, Code::Syntax);
        assert_eq!(parse("tt)").unwrap_err().code, Code::Syntax);
    }
}
