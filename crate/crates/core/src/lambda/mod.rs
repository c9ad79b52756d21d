//! Simply typed lambda calculus over sorted base types: terms, typing,
//! substitution, normalization, alpha-equivalence and occurrence counting.

mod parse;
mod term;
mod ty;
mod unify;

pub use parse::{connective_type, is_quantifier, parse_term, parse_type, ParseError, Signature};
pub use term::{
    alpha_eq, classify_occurrences, equivalence_key, infer, lenient_type, normalize, subst_unchecked,
    substitute, type_of, Nameless, NormalForm, OccurrenceClass, Path, Step, Term, TypeError,
};
pub use ty::{SemType, ENTITY, PROP};
pub use unify::{Clash, Unifier};
