//! A proof-checking kernel for XTT, a cubical type theory with a universe of
//! codes, boundary separation and type case.

pub mod conv;
pub mod diag;
pub mod domain;
pub mod elab;
pub mod eval;
pub mod face;
pub mod harness;
pub mod pretty;
pub mod quote;
pub mod sexp;
pub mod surface;
pub mod syntax;
