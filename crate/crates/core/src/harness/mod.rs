//! Verification material: the corpus, the closed-boolean term generator and
//! the face-entailment oracle.

pub mod corpus;
pub mod fuzz;
pub mod generate;
pub mod laws;
pub mod oracle;
