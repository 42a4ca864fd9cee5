//! Surface syntax: named terms with spans, a lexer and a recursive-descent
//! parser.
//!
//! Precedence, loosest first: λ and ⟨i⟩ bodies extend as far as possible;
//! `->` (right associative); `*`; `@`; application; `.1`/`.2`.

use crate::diag::{Code, Diagnostic, Result, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// A binder `x. body` as used by motives, lines and tubes.
pub type Bound = (String, Box<Expr>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Var(String),
    /// `0` or `1` in term position; only meaningful as a dimension argument.
    DimLit(bool),
    Univ,
    Bool,
    Tt,
    Ff,
    Abort,
    Refl,
    CodeBool,
    Pi(Vec<(String, Expr)>, Box<Expr>),
    Sg(Vec<(String, Expr)>, Box<Expr>),
    Lam(Vec<String>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    Path {
        line: Bound,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    DLam(Vec<String>, Box<Expr>),
    DApp(Box<Expr>, SDim),
    If {
        motive: Bound,
        scrut: Box<Expr>,
        tt: Box<Expr>,
        ff: Box<Expr>,
    },
    Split(Vec<(SFormula, Expr)>),
    Coe {
        from: SDim,
        to: SDim,
        line: Bound,
        arg: Box<Expr>,
    },
    Com {
        from: SDim,
        to: SDim,
        wall: SDim,
        line: Bound,
        tube: Bound,
    },
    Hcom {
        from: SDim,
        to: SDim,
        wall: SDim,
        code: Box<Expr>,
        tube: Bound,
    },
    CodePi(Box<Expr>, Bound),
    CodeSg(Box<Expr>, Bound),
    CodePath {
        line: Bound,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    El(Box<Expr>),
    TypeCase {
        motive: Bound,
        scrut: Box<Expr>,
        pi: ([String; 2], Box<Expr>),
        sg: ([String; 2], Box<Expr>),
        path: ([String; 5], Box<Expr>),
        bool: Box<Expr>,
    },
    Ann(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDim {
    pub kind: SDimKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SDimKind {
    Zero,
    One,
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SFormula {
    pub kind: SFormulaKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SFormulaKind {
    Eq(SDim, SDim),
    Or(Box<SFormula>, Box<SFormula>),
    Boundary(SDim),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Def { name: String, ty: Expr, body: Expr },
    Check { term: Expr, ty: Expr },
    Normalize { term: Expr, ty: Expr, expect: Expr },
    /// The inner declaration must fail to elaborate.
    Fail(Box<Decl>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: Span,
}

impl Decl {
    /// The name reported for this declaration.
    pub fn name(&self) -> String {
        match &self.kind {
            DeclKind::Def { name, .. } => name.clone(),
            DeclKind::Check { .. } => "#check".into(),
            DeclKind::Normalize { .. } => "#normalize".into(),
            DeclKind::Fail(inner) => format!("#fail {}", inner.name()),
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match &self.kind {
            DeclKind::Def { .. } => "def",
            DeclKind::Check { .. } => "check",
            DeclKind::Normalize { .. } => "normalize",
            DeclKind::Fail(_) => "fail",
        }
    }
}

/// An entry of a context written as `x : A, i, φ, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtxEntry {
    Term(String, Expr),
    Dim(String, Span),
    Formula(SFormula),
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    Proj1,
    Proj2,
    Arrow,
    Star,
    Lambda,
    LAngle,
    RAngle,
    At,
    Bar,
    Eq,
    Or,
    Boundary,
    // keywords
    Univ,
    BoolTy,
    CodeBool,
    Tt,
    Ff,
    Abort,
    Refl,
    Coe,
    Com,
    Hcom,
    If,
    Path,
    CodePath,
    CodePi,
    CodeSg,
    El,
    TyCase,
    Def,
    Expect,
    HashCheck,
    HashNormalize,
    HashFail,
    Eof,
}

fn keyword(s: &str) -> Option<Tok> {
    Some(match s {
        "U" => Tok::Univ,
        "bool" => Tok::BoolTy,
        "bool^" => Tok::CodeBool,
        "tt" => Tok::Tt,
        "ff" => Tok::Ff,
        "abort" => Tok::Abort,
        "refl" => Tok::Refl,
        "coe" => Tok::Coe,
        "com" => Tok::Com,
        "hcom" => Tok::Hcom,
        "if" => Tok::If,
        "path" => Tok::Path,
        "path^" => Tok::CodePath,
        "pi^" => Tok::CodePi,
        "sg^" => Tok::CodeSg,
        "El" => Tok::El,
        "tycase" => Tok::TyCase,
        "def" => Tok::Def,
        "expect" => Tok::Expect,
        "dd" => Tok::Boundary,
        _ => return None,
    })
}

/// Whether `s` cannot be used as a variable name.
pub fn is_reserved(s: &str) -> bool {
    keyword(s).is_some() || s == "I"
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let end_of = |k: usize| chars.get(k).map_or(src.len(), |&(o, _)| o);
    let mut k = 0;
    while k < chars.len() {
        let (start, c) = chars[k];
        let next = chars.get(k + 1).map(|&(_, c)| c);
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c == '-' && next == Some('-') {
            while k < chars.len() && chars[k].1 != '\n' {
                k += 1;
            }
            continue;
        }
        let single = |t: Tok| (t, 1);
        let (tok, len) = match c {
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '[' => single(Tok::LBrack),
            ']' => single(Tok::RBrack),
            '{' => single(Tok::LBrace),
            '}' => single(Tok::RBrace),
            ',' => single(Tok::Comma),
            ':' => single(Tok::Colon),
            '*' | '×' => single(Tok::Star),
            'λ' => single(Tok::Lambda),
            '<' | '⟨' => single(Tok::LAngle),
            '>' | '⟩' => single(Tok::RAngle),
            '@' => single(Tok::At),
            '|' => single(Tok::Bar),
            '=' => single(Tok::Eq),
            '∨' => single(Tok::Or),
            '∂' => single(Tok::Boundary),
            '→' => single(Tok::Arrow),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '\\' if next == Some('/') => (Tok::Or, 2),
            '\\' => single(Tok::Lambda),
            '.' => match (next, chars.get(k + 2).map(|&(_, c)| c)) {
                (Some('1'), after) if !after.is_some_and(ident_char) => (Tok::Proj1, 2),
                (Some('2'), after) if !after.is_some_and(ident_char) => (Tok::Proj2, 2),
                _ => single(Tok::Dot),
            },
            '#' => {
                let mut j = k + 1;
                while j < chars.len() && ident_char(chars[j].1) {
                    j += 1;
                }
                let word = &src[end_of(k + 1)..end_of(j)];
                let tok = match word {
                    "check" => Tok::HashCheck,
                    "normalize" => Tok::HashNormalize,
                    "fail" => Tok::HashFail,
                    _ => {
                        return Err(Diagnostic::new(
                            Code::Lex,
                            Span::new(start, end_of(j)),
                            format!("unknown directive `#{word}`"),
                        ))
                    }
                };
                (tok, j - k)
            }
            c if c.is_ascii_digit() => {
                let mut j = k;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                match &src[start..end_of(j)] {
                    "0" => (Tok::Zero, 1),
                    "1" => (Tok::One, 1),
                    other => {
                        return Err(Diagnostic::new(
                            Code::Lex,
                            Span::new(start, end_of(j)),
                            format!("numeral `{other}` is not a dimension constant"),
                        ))
                    }
                }
            }
            c if ident_char(c) => {
                let mut j = k;
                while j < chars.len() && ident_char(chars[j].1) {
                    j += 1;
                }
                if chars.get(j).map(|&(_, c)| c) == Some('^') {
                    j += 1;
                }
                let word = &src[start..end_of(j)];
                let tok = keyword(word).unwrap_or_else(|| Tok::Ident(word.to_string()));
                if word.ends_with('^') && matches!(tok, Tok::Ident(_)) {
                    return Err(Diagnostic::new(
                        Code::Lex,
                        Span::new(start, end_of(j)),
                        format!("unknown code former `{word}`"),
                    ));
                }
                (tok, j - k)
            }
            other => {
                return Err(Diagnostic::new(
                    Code::Lex,
                    Span::new(start, start + other.len_utf8()),
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push((tok, Span::new(start, end_of(k + len))));
        k += len;
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

impl Parser {
    fn new(src: &str) -> Result<Parser> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn since(&self, start: Span) -> Span {
        Span::new(start.start, self.prev_end().max(start.start))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, what: &str) -> Result<T> {
        Err(Diagnostic::new(
            Code::Syntax,
            self.span(),
            format!("expected {what}, found {}", describe(self.peek())),
        ))
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn idents(&mut self) -> Result<Vec<String>> {
        let mut names = vec![self.ident()?];
        while let Tok::Ident(_) = self.peek() {
            names.push(self.ident()?);
        }
        Ok(names)
    }

    fn dim(&mut self) -> Result<SDim> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Zero => SDimKind::Zero,
            Tok::One => SDimKind::One,
            Tok::Ident(s) => SDimKind::Var(s),
            _ => return self.error("a dimension"),
        };
        self.bump();
        Ok(SDim { kind, span })
    }

    fn formula(&mut self) -> Result<SFormula> {
        let lhs = self.formula_atom()?;
        if self.eat(&Tok::Or) {
            let rhs = self.formula()?;
            let span = lhs.span.to(rhs.span);
            return Ok(SFormula {
                kind: SFormulaKind::Or(Box::new(lhs), Box::new(rhs)),
                span,
            });
        }
        Ok(lhs)
    }

    fn formula_atom(&mut self) -> Result<SFormula> {
        let start = self.span();
        if self.eat(&Tok::LParen) {
            let phi = self.formula()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(phi);
        }
        if self.eat(&Tok::Boundary) {
            let r = self.dim()?;
            return Ok(SFormula {
                kind: SFormulaKind::Boundary(r),
                span: self.since(start),
            });
        }
        let r = self.dim()?;
        self.expect(&Tok::Eq, "`=`")?;
        let s = self.dim()?;
        Ok(SFormula {
            kind: SFormulaKind::Eq(r, s),
            span: self.since(start),
        })
    }

    /// `(x. e)`
    fn bound(&mut self) -> Result<Bound> {
        self.expect(&Tok::LParen, "`(` opening a binder")?;
        let x = self.ident()?;
        self.expect(&Tok::Dot, "`.` after the bound name")?;
        let body = self.expr()?;
        self.expect(&Tok::RParen, "`)` closing a binder")?;
        Ok((x, Box::new(body)))
    }

    fn mk(&self, kind: ExprKind, start: Span) -> Expr {
        Expr {
            kind,
            span: self.since(start),
        }
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let start = self.span();
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let names = self.idents()?;
                self.expect(&Tok::Dot, "`.` after λ binders")?;
                let body = self.expr()?;
                Ok(self.mk(ExprKind::Lam(names, Box::new(body)), start))
            }
            Tok::LAngle => {
                self.bump();
                let names = self.idents()?;
                self.expect(&Tok::RAngle, "`>` closing a dimension binder")?;
                let body = self.expr()?;
                Ok(self.mk(ExprKind::DLam(names, Box::new(body)), start))
            }
            _ => self.arrow(),
        }
    }

    fn arrow(&mut self) -> Result<Expr> {
        let start = self.span();
        let lhs = self.product()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.expr()?;
            let tele = telescope(&lhs).unwrap_or_else(|| vec![("_".to_string(), lhs)]);
            return Ok(self.mk(ExprKind::Pi(tele, Box::new(rhs)), start));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let start = self.span();
        let lhs = self.dapp()?;
        if self.eat(&Tok::Star) {
            let rhs = match self.peek() {
                Tok::Lambda | Tok::LAngle => self.expr()?,
                _ => self.product()?,
            };
            let tele = telescope(&lhs).unwrap_or_else(|| vec![("_".to_string(), lhs)]);
            return Ok(self.mk(ExprKind::Sg(tele, Box::new(rhs)), start));
        }
        Ok(lhs)
    }

    fn dapp(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut e = self.app()?;
        while self.eat(&Tok::At) {
            let r = self.dim()?;
            e = self.mk(ExprKind::DApp(Box::new(e), r), start);
        }
        Ok(e)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Zero
                | Tok::One
                | Tok::LParen
                | Tok::LBrack
                | Tok::Univ
                | Tok::BoolTy
                | Tok::CodeBool
                | Tok::Tt
                | Tok::Ff
                | Tok::Abort
                | Tok::Refl
                | Tok::Coe
                | Tok::Com
                | Tok::Hcom
                | Tok::If
                | Tok::Path
                | Tok::CodePath
                | Tok::CodePi
                | Tok::CodeSg
                | Tok::El
                | Tok::TyCase
        )
    }

    fn app(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut e = self.postfix()?;
        while self.starts_atom() {
            let arg = self.postfix()?;
            e = self.mk(ExprKind::App(Box::new(e), Box::new(arg)), start);
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut e = self.atom()?;
        loop {
            if self.eat(&Tok::Proj1) {
                e = self.mk(ExprKind::Fst(Box::new(e)), start);
            } else if self.eat(&Tok::Proj2) {
                e = self.mk(ExprKind::Snd(Box::new(e)), start);
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.span();
        let simple = |k: ExprKind| Some(k);
        let kind = match self.peek().clone() {
            Tok::Ident(s) => simple(ExprKind::Var(s)),
            Tok::Zero => simple(ExprKind::DimLit(false)),
            Tok::One => simple(ExprKind::DimLit(true)),
            Tok::Univ => simple(ExprKind::Univ),
            Tok::BoolTy => simple(ExprKind::Bool),
            Tok::CodeBool => simple(ExprKind::CodeBool),
            Tok::Tt => simple(ExprKind::Tt),
            Tok::Ff => simple(ExprKind::Ff),
            Tok::Abort => simple(ExprKind::Abort),
            Tok::Refl => simple(ExprKind::Refl),
            _ => None,
        };
        if let Some(kind) = kind {
            self.bump();
            return Ok(self.mk(kind, start));
        }
        let tok = self.bump();
        let kind = match tok {
            Tok::LParen => {
                let e = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let b = self.expr()?;
                    self.expect(&Tok::RParen, "`)` closing a pair")?;
                    ExprKind::Pair(Box::new(e), Box::new(b))
                } else if self.eat(&Tok::Colon) {
                    let ty = self.expr()?;
                    self.expect(&Tok::RParen, "`)` closing an annotation")?;
                    ExprKind::Ann(Box::new(e), Box::new(ty))
                } else {
                    self.expect(&Tok::RParen, "`)`")?;
                    return Ok(Expr {
                        kind: e.kind,
                        span: self.since(start),
                    });
                }
            }
            Tok::LBrack => {
                let mut branches = Vec::new();
                loop {
                    let phi = self.formula()?;
                    self.expect(&Tok::Arrow, "`->` after a face formula")?;
                    let e = self.expr()?;
                    branches.push((phi, e));
                    if !self.eat(&Tok::Bar) {
                        break;
                    }
                }
                self.expect(&Tok::RBrack, "`]` closing a split")?;
                ExprKind::Split(branches)
            }
            Tok::Coe => {
                let from = self.dim()?;
                let to = self.dim()?;
                let line = self.bound()?;
                let arg = self.postfix()?;
                ExprKind::Coe {
                    from,
                    to,
                    line,
                    arg: Box::new(arg),
                }
            }
            Tok::Com => {
                let from = self.dim()?;
                let to = self.dim()?;
                let wall = self.dim()?;
                let line = self.bound()?;
                let tube = self.bound()?;
                ExprKind::Com {
                    from,
                    to,
                    wall,
                    line,
                    tube,
                }
            }
            Tok::Hcom => {
                let from = self.dim()?;
                let to = self.dim()?;
                let wall = self.dim()?;
                let code = self.postfix()?;
                let tube = self.bound()?;
                ExprKind::Hcom {
                    from,
                    to,
                    wall,
                    code: Box::new(code),
                    tube,
                }
            }
            Tok::If => {
                let motive = self.bound()?;
                let scrut = self.postfix()?;
                let tt = self.postfix()?;
                let ff = self.postfix()?;
                ExprKind::If {
                    motive,
                    scrut: Box::new(scrut),
                    tt: Box::new(tt),
                    ff: Box::new(ff),
                }
            }
            Tok::Path | Tok::CodePath => {
                let line = self.bound()?;
                let left = Box::new(self.postfix()?);
                let right = Box::new(self.postfix()?);
                if tok == Tok::Path {
                    ExprKind::Path { line, left, right }
                } else {
                    ExprKind::CodePath { line, left, right }
                }
            }
            Tok::CodePi | Tok::CodeSg => {
                let dom = Box::new(self.postfix()?);
                let fam = self.bound()?;
                if tok == Tok::CodePi {
                    ExprKind::CodePi(dom, fam)
                } else {
                    ExprKind::CodeSg(dom, fam)
                }
            }
            Tok::El => ExprKind::El(Box::new(self.postfix()?)),
            Tok::TyCase => self.tycase()?,
            _ => {
                self.pos -= 1;
                return self.error("a term");
            }
        };
        Ok(self.mk(kind, start))
    }

    fn tycase(&mut self) -> Result<ExprKind> {
        let motive = self.bound()?;
        let scrut = Box::new(self.postfix()?);
        self.expect(&Tok::LBrace, "`{` opening type-case branches")?;
        let (mut pi, mut sg, mut path, mut bool) = (None, None, None, None);
        loop {
            let at = self.span();
            let head = match self.peek().clone() {
                Tok::Ident(s) => s,
                Tok::BoolTy => "bool".into(),
                Tok::Path => "path".into(),
                _ => return self.error("a type-case branch (`pi`, `sg`, `path` or `bool`)"),
            };
            self.bump();
            let names = if head == "bool" { Vec::new() } else { self.idents()? };
            self.expect(&Tok::Arrow, "`->` in a type-case branch")?;
            let body = Box::new(self.expr()?);
            let arity = |n: usize| -> Result<()> {
                if names.len() == n {
                    Ok(())
                } else {
                    Err(Diagnostic::new(
                        Code::Syntax,
                        at,
                        format!("the `{head}` branch binds {n} names, found {}", names.len()),
                    ))
                }
            };
            let slot_taken = |taken: bool| -> Result<()> {
                if taken {
                    Err(Diagnostic::new(Code::Syntax, at, format!("duplicate `{head}` branch")))
                } else {
                    Ok(())
                }
            };
            match head.as_str() {
                "pi" => {
                    arity(2)?;
                    slot_taken(pi.is_some())?;
                    pi = Some(([names[0].clone(), names[1].clone()], body));
                }
                "sg" => {
                    arity(2)?;
                    slot_taken(sg.is_some())?;
                    sg = Some(([names[0].clone(), names[1].clone()], body));
                }
                "path" => {
                    arity(5)?;
                    slot_taken(path.is_some())?;
                    path = Some((std::array::from_fn(|k| names[k].clone()), body));
                }
                "bool" => {
                    slot_taken(bool.is_some())?;
                    bool = Some(body);
                }
                other => {
                    return Err(Diagnostic::new(
                        Code::Syntax,
                        at,
                        format!("unknown type-case branch `{other}`"),
                    ))
                }
            }
            if !self.eat(&Tok::Bar) {
                break;
            }
        }
        let close = self.span();
        self.expect(&Tok::RBrace, "`}` closing type-case branches")?;
        let missing = |what: &str| Diagnostic::new(Code::Syntax, close, format!("missing `{what}` branch"));
        Ok(ExprKind::TypeCase {
            motive,
            scrut,
            pi: pi.ok_or_else(|| missing("pi"))?,
            sg: sg.ok_or_else(|| missing("sg"))?,
            path: path.ok_or_else(|| missing("path"))?,
            bool: bool.ok_or_else(|| missing("bool"))?,
        })
    }

    fn decl(&mut self) -> Result<Decl> {
        let start = self.span();
        let kind = match self.bump() {
            Tok::Def => {
                let name = self.ident()?;
                self.expect(&Tok::Colon, "`:` after the definition's name")?;
                let ty = self.expr()?;
                self.expect(&Tok::Eq, "`=` before the definition's body")?;
                let body = self.expr()?;
                DeclKind::Def { name, ty, body }
            }
            Tok::HashCheck => {
                let term = self.expr()?;
                self.expect(&Tok::Colon, "`:` in #check")?;
                let ty = self.expr()?;
                DeclKind::Check { term, ty }
            }
            Tok::HashNormalize => {
                let term = self.expr()?;
                self.expect(&Tok::Colon, "`:` in #normalize")?;
                let ty = self.expr()?;
                self.expect(&Tok::Expect, "`expect` in #normalize")?;
                let expect = self.expr()?;
                DeclKind::Normalize { term, ty, expect }
            }
            Tok::HashFail => DeclKind::Fail(Box::new(self.decl()?)),
            _ => {
                self.pos -= 1;
                return self.error("a declaration (`def`, `#check`, `#normalize` or `#fail`)");
            }
        };
        Ok(Decl {
            kind,
            span: self.since(start),
        })
    }

    fn ctx_entry(&mut self) -> Result<Vec<CtxEntry>> {
        if let Tok::Ident(_) = self.peek() {
            let mut n = 0;
            while let Tok::Ident(_) = self.peek_at(n) {
                n += 1;
            }
            match self.peek_at(n) {
                Tok::Comma | Tok::Eof if n == 1 => {
                    let span = self.span();
                    return Ok(vec![CtxEntry::Dim(self.ident()?, span)]);
                }
                Tok::Colon => {
                    let spans: Vec<Span> = (0..n).map(|k| self.toks[self.pos + k].1).collect();
                    let names = self.idents()?;
                    self.bump();
                    if let Tok::Ident(s) = self.peek() {
                        if (s == "I" || s == "𝕀") && matches!(self.peek_at(1), Tok::Comma | Tok::Eof) {
                            self.bump();
                            return Ok(names.into_iter().zip(spans).map(|(x, sp)| CtxEntry::Dim(x, sp)).collect());
                        }
                    }
                    let ty = self.expr()?;
                    return Ok(names.into_iter().map(|x| CtxEntry::Term(x, ty.clone())).collect());
                }
                _ => {}
            }
        }
        Ok(vec![CtxEntry::Formula(self.formula()?)])
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }
}

/// Reads `(x y : A) (z : B)` — parsed as annotations, possibly applied to
/// one another — as a binder telescope.
fn telescope(e: &Expr) -> Option<Vec<(String, Expr)>> {
    match &e.kind {
        ExprKind::Ann(vars, ty) => {
            let names = var_list(vars)?;
            Some(names.into_iter().map(|x| (x, (**ty).clone())).collect())
        }
        ExprKind::App(f, a) => {
            let mut tele = telescope(f)?;
            tele.extend(telescope(a)?);
            Some(tele)
        }
        _ => None,
    }
}

fn var_list(e: &Expr) -> Option<Vec<String>> {
    match &e.kind {
        ExprKind::Var(x) => Some(vec![x.clone()]),
        ExprKind::App(f, a) => {
            let mut names = var_list(f)?;
            match &a.kind {
                ExprKind::Var(x) => names.push(x.clone()),
                _ => return None,
            }
            Some(names)
        }
        _ => None,
    }
}

pub fn parse_file(src: &str) -> Result<Vec<Decl>> {
    let mut p = Parser::new(src)?;
    let mut decls = Vec::new();
    while *p.peek() != Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_formula(src: &str) -> Result<SFormula> {
    let mut p = Parser::new(src)?;
    let phi = p.formula()?;
    p.finish()?;
    Ok(phi)
}

/// A comma-separated context: `x : A`, `i` or `i : I` for dimensions, or a
/// face formula.
pub fn parse_context(src: &str) -> Result<Vec<CtxEntry>> {
    let mut p = Parser::new(src)?;
    let mut entries = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(entries);
    }
    loop {
        entries.extend(p.ctx_entry()?);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.finish()?;
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(src: &str) -> ExprKind {
        parse_expr(src).unwrap().kind
    }

    #[test]
    fn definition_with_telescope() {
        let decls = parse_file("def id : (A : U) -> El A -> El A = λ A x. x").unwrap();
        assert_eq!(decls.len(), 1);
        match &decls[0].kind {
            DeclKind::Def { name, ty, body } => {
                assert_eq!(name, "id");
                assert!(matches!(&ty.kind, ExprKind::Pi(tele, _) if tele.len() == 1 && tele[0].0 == "A"));
                assert!(matches!(&body.kind, ExprKind::Lam(xs, _) if xs.len() == 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normalize_directive() {
        let decls = parse_file("#normalize coe 0 1 (i. bool) tt : El bool expect tt").unwrap();
        assert!(matches!(&decls[0].kind, DeclKind::Normalize { .. }));
    }

    #[test]
    fn dangling_lambda_is_a_syntax_error() {
        let err = parse_expr("λ x").unwrap_err();
        assert_eq!(err.code, Code::Syntax);
        assert_eq!(err.span.start, "λ x".len());
    }

    #[test]
    fn application_binds_tighter_than_products_and_arrows() {
        match kind("f a * g b -> c") {
            ExprKind::Pi(tele, _) => match &tele[0].1.kind {
                ExprKind::Sg(..) => {}
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arrows_associate_right() {
        match kind("a -> b -> c") {
            ExprKind::Pi(_, rhs) => assert!(matches!(rhs.kind, ExprKind::Pi(..))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_application_is_looser_than_application() {
        match kind("h x @ i") {
            ExprKind::DApp(f, r) => {
                assert!(matches!(f.kind, ExprKind::App(..)));
                assert_eq!(r.kind, SDimKind::Var("i".into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projections_and_splits() {
        assert!(matches!(kind("p.1"), ExprKind::Fst(_)));
        match kind("[i = 0 -> tt | dd j \\/ i = 1 -> ff]") {
            ExprKind::Split(bs) => {
                assert_eq!(bs.len(), 2);
                assert!(matches!(bs[1].0.kind, SFormulaKind::Or(..)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn type_case() {
        let src = "tycase (x. U) c { pi a b -> a | sg a b -> a | path a0 a1 a x0 x1 -> a0 | bool -> bool^ }";
        assert!(matches!(kind(src), ExprKind::TypeCase { .. }));
        assert!(parse_expr("tycase (x. U) c { pi a -> a }").is_err());
    }

    #[test]
    fn contexts() {
        let entries = parse_context("i, j : I, x y : El A, i = 0 \\/ j = 1").unwrap();
        assert_eq!(entries.len(), 5);
        assert!(matches!(entries[1], CtxEntry::Dim(..)));
        assert!(matches!(entries[3], CtxEntry::Term(..)));
        assert!(matches!(entries[4], CtxEntry::Formula(..)));
    }

    #[test]
    fn unicode_forms() {
        assert!(matches!(kind("⟨i⟩ p @ i"), ExprKind::DLam(..)));
        assert!(matches!(kind("(x : A) → B"), ExprKind::Pi(..)));
        assert!(matches!(kind("A × B"), ExprKind::Sg(..)));
    }

    #[test]
    fn lexical_errors() {
        assert_eq!(parse_expr("coe 0 2").unwrap_err().code, Code::Lex);
        assert_eq!(parse_expr("$").unwrap_err().code, Code::Lex);
    }
}
