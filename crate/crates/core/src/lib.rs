//! A categorial-grammar semantic compiler.
//!
//! A sentence is parsed with a Lambek-calculus lexicon; every
//! non-equivalent derivation yields a linear lambda term, lexical meanings
//! are substituted in, sort mismatches are repaired with lexicon-provided
//! coercions, and the normalized result is rendered as a higher-order logic
//! formula.

pub mod category;
pub mod compose;
pub mod driver;
pub mod hol;
pub mod lambda;
pub mod lexicon;
pub mod metrics;
pub mod prover;
