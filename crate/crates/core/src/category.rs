//! Syntactic categories of the product-free Lambek calculus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lambda::SemType;

/// A category: an atom, `A\B` (looks left for `A`, yields `B`) or `B/A`
/// (looks right for `A`, yields `B`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atom(String),
    /// `argument \ result`
    Under(Box<Category>, Box<Category>),
    /// `result / argument`
    Over(Box<Category>, Box<Category>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("category syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

pub const DEFAULT_ATOMS: [&str; 3] = ["np", "n", "S"];

impl Category {
    pub fn atom(name: impl Into<String>) -> Self {
        Category::Atom(name.into())
    }

    pub fn under(argument: Category, result: Category) -> Self {
        Category::Under(Box::new(argument), Box::new(result))
    }

    pub fn over(result: Category, argument: Category) -> Self {
        Category::Over(Box::new(result), Box::new(argument))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Category::Atom(_))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(c: &Category, out: &mut BTreeSet<String>) {
            match c {
                Category::Atom(a) => {
                    out.insert(a.clone());
                }
                Category::Under(a, b) | Category::Over(b, a) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Category::Atom(_) => 0,
            Category::Under(a, b) | Category::Over(b, a) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Add the signed atom occurrences of this category to `counts`:
    /// `positive` is the polarity of the category itself.
    pub fn polarity_counts(&self, positive: bool, counts: &mut BTreeMap<String, i64>) {
        match self {
            Category::Atom(a) => *counts.entry(a.clone()).or_default() += if positive { 1 } else { -1 },
            Category::Under(arg, res) | Category::Over(res, arg) => {
                arg.polarity_counts(!positive, counts);
                res.polarity_counts(positive, counts);
            }
        }
    }

    /// Number of atom occurrences with negative polarity when the category
    /// sits in an antecedent.
    pub fn negative_atoms(&self) -> usize {
        fn go(c: &Category, positive: bool) -> usize {
            match c {
                Category::Atom(_) => usize::from(!positive),
                Category::Under(a, r) | Category::Over(r, a) => go(a, !positive) + go(r, positive),
            }
        }
        go(self, false)
    }
}

impl serde::Serialize for Category {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(c: &Category, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if c.is_atom() {
                write!(f, "{c}")
            } else {
                write!(f, "({c})")
            }
        }
        match self {
            Category::Atom(a) => write!(f, "{a}"),
            Category::Under(a, b) => {
                operand(a, f)?;
                write!(f, "\\")?;
                operand(b, f)
            }
            Category::Over(b, a) => {
                operand(b, f)?;
                write!(f, "/")?;
                operand(a, f)
            }
        }
    }
}

/// Map from base categories to semantic types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortMap(pub BTreeMap<String, SemType>);

impl Default for SortMap {
    fn default() -> Self {
        let et = SemType::arrow(SemType::e(), SemType::t());
        SortMap(BTreeMap::from([
            ("np".to_string(), SemType::e()),
            ("n".to_string(), et),
            ("S".to_string(), SemType::t()),
        ]))
    }
}

impl SortMap {
    pub fn get(&self, atom: &str) -> Option<&SemType> {
        self.0.get(atom)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.0.keys().cloned().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Name(&'a str),
    Under,
    Over,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok<'_>)>, CategoryError> {
    let mut out = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        match c {
            '\\' => out.push((i, Tok::Under)),
            '/' => out.push((i, Tok::Over)),
            '(' => out.push((i, Tok::Open)),
            ')' => out.push((i, Tok::Close)),
            c if c.is_whitespace() => {}
            c if c.is_alphanumeric() || c == '_' => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = iter.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        iter.next();
                    } else {
                        break;
                    }
                }
                out.push((i, Tok::Name(&text[i..end])));
            }
            other => {
                return Err(CategoryError::Syntax {
                    position: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a, 's> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
    atoms: &'s BTreeSet<String>,
}

impl<'a> Parser<'a, '_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn fail<T>(&self, message: &str) -> Result<T, CategoryError> {
        Err(CategoryError::Syntax {
            position: self.offset(),
            message: message.to_string(),
        })
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    // expr := operand (('\' | '/') operand)?
    fn expr(&mut self) -> Result<Category, CategoryError> {
        let left = self.operand()?;
        let cat = match self.peek() {
            Some(Tok::Under) => {
                self.pos += 1;
                Category::under(left, self.operand()?)
            }
            Some(Tok::Over) => {
                self.pos += 1;
                Category::over(left, self.operand()?)
            }
            _ => return Ok(left),
        };
        if matches!(self.peek(), Some(Tok::Under | Tok::Over)) {
            return self.fail("ambiguous nesting: parenthesize compound operands");
        }
        Ok(cat)
    }

    fn operand(&mut self) -> Result<Category, CategoryError> {
        match self.peek() {
            Some(Tok::Name(name)) => {
                if !self.atoms.contains(name) {
                    return self.fail(&format!("unknown atom `{name}`"));
                }
                self.pos += 1;
                Ok(Category::atom(name))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(Tok::Close) {
                    return self.fail("unbalanced parentheses");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Close) => self.fail("unbalanced parentheses"),
            _ => self.fail("expected an atom or `(`"),
        }
    }
}

/// Parse infix notation over the default atoms `np`, `n`, `S`.
pub fn parse_category(text: &str) -> Result<Category, CategoryError> {
    let atoms: BTreeSet<String> = DEFAULT_ATOMS.iter().map(|s| s.to_string()).collect();
    parse_category_with(text, &atoms)
}

/// Parse infix notation; compound operands of `\` and `/` must be
/// parenthesized.
pub fn parse_category_with(text: &str, atoms: &BTreeSet<String>) -> Result<Category, CategoryError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        atoms,
    };
    let cat = p.expr()?;
    if p.pos < p.toks.len() {
        return p.fail(if p.peek() == Some(Tok::Close) {
            "unbalanced parentheses"
        } else {
            "trailing input"
        });
    }
    Ok(cat)
}

/// Nesting of implications on the argument side.
pub fn order(cat: &Category) -> usize {
    match cat {
        Category::Atom(_) => 0,
        Category::Under(arg, res) | Category::Over(res, arg) => order(res).max(order(arg) + 1),
    }
}

pub fn count_atoms(cat: &Category) -> usize {
    match cat {
        Category::Atom(_) => 1,
        Category::Under(a, b) | Category::Over(b, a) => count_atoms(a) + count_atoms(b),
    }
}

/// Direction-forgetting translation to semantic types.
pub fn sem_type(cat: &Category, sorts: &SortMap) -> Result<SemType, CategoryError> {
    match cat {
        Category::Atom(a) => sorts.get(a).cloned().ok_or_else(|| CategoryError::UnknownAtom(a.clone())),
        Category::Under(arg, res) | Category::Over(res, arg) => {
            Ok(SemType::arrow(sem_type(arg, sorts)?, sem_type(res, sorts)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cat(s: &str) -> Category {
        parse_category(s).unwrap()
    }

    #[test]
    fn parses_lexicon_categories() {
        let np = Category::atom("np");
        let s = Category::atom("S");
        assert_eq!(cat("(np\\S)/np"), Category::over(Category::under(np.clone(), s.clone()), np.clone()));
        assert_eq!(cat("np"), np);
        assert_eq!(
            cat("((S/np)\\S)/n"),
            Category::over(Category::under(Category::over(s.clone(), np), s), Category::atom("n"))
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["(np\\S", "np\\S)", "np\\S/np", "pp", "", "np\\", "np $"] {
            assert!(
                matches!(parse_category(bad), Err(CategoryError::Syntax { .. })),
                "{bad:?} should fail"
            );
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(order(&cat("np")), 0);
        assert_eq!(order(&cat("(np\\S)/np")), 1);
        assert_eq!(order(&cat("S/(np\\S)")), 2);
        assert_eq!(order(&cat("(S/(np\\S))/n")), 2);
    }

    #[test]
    fn sem_type_examples() {
        let sorts = SortMap::default();
        assert_eq!(sem_type(&cat("np"), &sorts).unwrap().to_string(), "e");
        assert_eq!(sem_type(&cat("n"), &sorts).unwrap().to_string(), "e->t");
        assert_eq!(sem_type(&cat("(S/(np\\S))/n"), &sorts).unwrap().to_string(), "(e->t)->(e->t)->t");
        let pp = Category::atom("pp");
        assert_eq!(sem_type(&pp, &sorts), Err(CategoryError::UnknownAtom("pp".into())));
    }

    #[test]
    fn atom_counts() {
        assert_eq!(count_atoms(&cat("np")), 1);
        assert_eq!(count_atoms(&cat("(np\\S)/np")), 3);
        assert_eq!(count_atoms(&cat("((S/(np\\S))/n)")), 4);
    }

    fn arb_category() -> impl Strategy<Value = Category> {
        let leaf = prop_oneof![Just("np"), Just("n"), Just("S")].prop_map(Category::atom);
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Category::under(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Category::over(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn order_is_direction_symmetric(a in arb_category(), b in arb_category()) {
            prop_assert_eq!(order(&Category::over(b.clone(), a.clone())), order(&Category::under(a, b)));
        }

        #[test]
        fn order_and_atoms_are_structural(a in arb_category(), b in arb_category()) {
            let c = Category::under(a.clone(), b.clone());
            prop_assert!(order(&c) <= c.depth());
            prop_assert_eq!(count_atoms(&c), count_atoms(&a) + count_atoms(&b));
            let sorts = SortMap::default();
            prop_assert_eq!(
                sem_type(&c, &sorts).unwrap(),
                SemType::arrow(sem_type(&a, &sorts).unwrap(), sem_type(&b, &sorts).unwrap())
            );
        }

        #[test]
        fn printer_and_parser_are_inverse(c in arb_category()) {
            prop_assert_eq!(parse_category(&c.to_string()).unwrap(), c);
        }
    }
}
