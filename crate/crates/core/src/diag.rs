//! Diagnostics with stable error codes and source positions.

use std::fmt;

/// Byte range into a source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Code {
    Lex,
    Syntax,
    Unbound,
    DimMisuse,
    Duplicate,
    TypeMismatch,
    ExpectedFunction,
    ExpectedPair,
    ExpectedPath,
    ExpectedCode,
    CannotInfer,
    NotATerm,
    BoundaryMismatch,
    UncoveredSplit,
    OverlapDisagreement,
    AbortInConsistent,
    NormalizeMismatch,
    UnexpectedSuccess,
    Undecided,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lex => "E001",
            Code::Syntax => "E002",
            Code::Unbound => "E010",
            Code::DimMisuse => "E011",
            Code::Duplicate => "E012",
            Code::TypeMismatch => "E020",
            Code::ExpectedFunction => "E021",
            Code::ExpectedPair => "E022",
            Code::ExpectedPath => "E023",
            Code::ExpectedCode => "E024",
            Code::CannotInfer => "E025",
            Code::NotATerm => "E026",
            Code::BoundaryMismatch => "E030",
            Code::UncoveredSplit => "E031",
            Code::OverlapDisagreement => "E032",
            Code::AbortInConsistent => "E033",
            Code::NormalizeMismatch => "E040",
            Code::UnexpectedSuccess => "E041",
            Code::Undecided => "E050",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct Diagnostic {
    pub code: Code,
    pub span: Span,
    pub message: String,
    /// Extra lines: mismatching branch constraints, normal forms, …
    pub notes: Vec<String>,
}

impl Diagnostic {
    pub fn new(code: Code, span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            code,
            span,
            message: message.into(),
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Diagnostic {
        self.notes.push(note.into());
        self
    }

    /// `file:line:col: E0xx: message` followed by indented notes.
    pub fn render(&self, file: &str, source: &str) -> String {
        let (line, col) = line_col(source, self.span.start);
        let mut out = format!("{file}:{line}:{col}: {}: {}", self.code, self.message);
        for note in &self.notes {
            for l in note.lines() {
                out.push_str("\n  ");
                out.push_str(l);
            }
        }
        out
    }
}

/// One-based line and column (in characters) of a byte offset.
pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub type Result<T> = std::result::Result<T, Diagnostic>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let src = "ab\ncd";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 4), (2, 2));
    }
}
