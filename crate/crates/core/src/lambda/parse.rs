//! Text notation for types and terms.
//!
//! Types: `e`, `dog`, `'a`, `e->t` (right associative), parentheses.
//! Terms: `\x:dog. (bark x)` (or `λ`), application by juxtaposition (left
//! associative), constants bare or annotated (`kid:(e->t)`), declared
//! polymorphic constants optionally instantiated (`the{a=human}`), free
//! variables written `?x:e`.
//!
//! Bare constants receive their type from the surrounding expectation;
//! comparisons during elaboration are made up to sort erasure so that
//! lexical terms may contain deliberate sort mismatches.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::term::Term;
use super::ty::{SemType, ENTITY, PROP};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared sort `{0}`")]
    SortUndeclared(String),
    #[error("undeclared polymorphic constant `{0}`")]
    UnknownPoly(String),
    #[error("cannot infer the type of constant `{0}`; annotate it")]
    Underdetermined(String),
    #[error("type error: expected {expected}, found {found} (`{context}`)")]
    Type {
        expected: SemType,
        found: SemType,
        context: String,
    },
}

/// Names available while parsing: declared sorts and polymorphic constants.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub sorts: BTreeSet<String>,
    pub poly: BTreeMap<String, SemType>,
}

impl Signature {
    pub fn new(sorts: impl IntoIterator<Item = impl Into<String>>) -> Self {
        let mut s: BTreeSet<String> = sorts.into_iter().map(Into::into).collect();
        s.insert(ENTITY.into());
        s.insert(PROP.into());
        Signature {
            sorts: s,
            poly: BTreeMap::new(),
        }
    }

    pub fn with_poly(mut self, name: impl Into<String>, schema: SemType) -> Self {
        self.poly.insert(name.into(), schema);
        self
    }
}

/// Built-in logical constants with a fixed type.
pub fn connective_type(name: &str) -> Option<SemType> {
    let t = SemType::t;
    match name {
        "and" | "or" | "implies" => Some(SemType::arrows([t(), t()], t())),
        "not" => Some(SemType::arrow(t(), t())),
        _ => None,
    }
}

pub fn is_quantifier(name: &str) -> bool {
    matches!(name, "forall" | "exists")
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Ident(String),
    TyVar(String),
    FreeVar(String),
    Colon,
    Dot,
    LParen,
    RParen,
    Arrow,
    LBrace,
    RBrace,
    Eq,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let ident_char = |c: char| c.is_alphanumeric() || c == '_' || c == '\'' || c == '#';
    while i < chars.len() {
        let (pos, c) = chars[i];
        let simple = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            '→' => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((pos, tok));
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1).map(|p| p.1) == Some('>') {
            out.push((pos, Tok::Arrow));
            i += 2;
            continue;
        }
        let (prefix, start) = match c {
            '\'' | '?' => (Some(c), i + 1),
            _ => (None, i),
        };
        let mut j = start;
        while j < chars.len() && ident_char(chars[j].1) {
            j += 1;
        }
        if j == start {
            return Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
        let name: String = chars[start..j].iter().map(|p| p.1).collect();
        out.push((
            pos,
            match prefix {
                Some('\'') => Tok::TyVar(name),
                Some(_) => Tok::FreeVar(name),
                None => Tok::Ident(name),
            },
        ));
        i = j;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Raw {
    Name(String, Option<SemType>),
    Free(String, SemType),
    Poly(String, BTreeMap<String, SemType>),
    App(Box<Raw>, Box<Raw>),
    Abs(String, SemType, Box<Raw>),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            sig,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }

    fn ty(&mut self) -> Result<SemType, ParseError> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(SemType::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<SemType, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if !self.sig.sorts.contains(&name) {
                    return Err(ParseError::SortUndeclared(name));
                }
                Ok(SemType::Sort(name))
            }
            Some(Tok::TyVar(name)) => {
                self.pos += 1;
                Ok(SemType::Var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => self.err("expected a type"),
        }
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut head: Option<Raw> = None;
        loop {
            let is_lambda = self.peek() == Some(&Tok::Lambda);
            let arg = match self.peek() {
                Some(Tok::Lambda) => Some(self.lambda()?),
                Some(Tok::Ident(_) | Tok::FreeVar(_) | Tok::LParen) => Some(self.atom()?),
                _ => None,
            };
            let Some(arg) = arg else { break };
            head = Some(match head {
                None => arg,
                Some(h) => Raw::App(Box::new(h), Box::new(arg)),
            });
            if is_lambda {
                break;
            }
        }
        match head {
            Some(h) => Ok(h),
            None => self.err("expected a term"),
        }
    }

    fn lambda(&mut self) -> Result<Raw, ParseError> {
        self.expect(Tok::Lambda)?;
        let Some(Tok::Ident(var)) = self.peek().cloned() else {
            return self.err("expected a bound variable");
        };
        self.pos += 1;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        Ok(Raw::Abs(var, ty, Box::new(body)))
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::FreeVar(name)) => {
                self.pos += 1;
                self.expect(Tok::Colon)?;
                let ty = self.ty_atom()?;
                Ok(Raw::Free(name, ty))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LBrace) {
                    self.pos += 1;
                    let mut inst = BTreeMap::new();
                    while self.peek() != Some(&Tok::RBrace) {
                        let Some(Tok::Ident(v)) = self.peek().cloned() else {
                            return self.err("expected a type variable name");
                        };
                        self.pos += 1;
                        self.expect(Tok::Eq)?;
                        inst.insert(v, self.ty()?);
                        if self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                        }
                    }
                    self.expect(Tok::RBrace)?;
                    return Ok(Raw::Poly(name, inst));
                }
                let ann = if self.peek() == Some(&Tok::Colon) {
                    self.pos += 1;
                    Some(self.ty_atom()?)
                } else {
                    None
                };
                Ok(Raw::Name(name, ann))
            }
            _ => self.err("expected a term"),
        }
    }
}

pub fn parse_type(text: &str, sig: &Signature) -> Result<SemType, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let ty = p.ty()?;
    p.finish()?;
    Ok(ty)
}

/// Parse and elaborate a term. With `expected`, bare constants are typed
/// against it; without, the term must be self-describing.
pub fn parse_term(text: &str, sig: &Signature, expected: Option<&SemType>) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let raw = p.term()?;
    p.finish()?;
    let mut el = Elab { sig, scope: Vec::new() };
    match expected {
        Some(ty) => el.check(&raw, ty),
        None => el.synth(&raw),
    }
}

fn erased_eq(a: &SemType, b: &SemType) -> bool {
    a.erase() == b.erase()
}

struct Elab<'a> {
    sig: &'a Signature,
    scope: Vec<(String, SemType)>,
}

impl Elab<'_> {
    fn lookup(&self, name: &str) -> Option<&SemType> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    fn poly(&self, name: &str, inst: &BTreeMap<String, SemType>) -> Result<Term, ParseError> {
        let schema = self
            .sig
            .poly
            .get(name)
            .ok_or_else(|| ParseError::UnknownPoly(name.to_string()))?;
        Ok(Term::Poly {
            name: name.to_string(),
            schema: schema.clone(),
            inst: inst.clone(),
        })
    }

    fn mismatch<T>(expected: &SemType, found: &SemType, context: &str) -> Result<T, ParseError> {
        Err(ParseError::Type {
            expected: expected.clone(),
            found: found.clone(),
            context: context.to_string(),
        })
    }

    fn synth(&mut self, raw: &Raw) -> Result<Term, ParseError> {
        match raw {
            Raw::Name(name, ann) => {
                if let Some(ty) = self.lookup(name).cloned() {
                    if let Some(a) = ann {
                        if a != &ty {
                            return Self::mismatch(&ty, a, name);
                        }
                    }
                    return Ok(Term::var(name.clone(), ty));
                }
                if self.sig.poly.contains_key(name) {
                    return self.poly(name, &BTreeMap::new());
                }
                if let Some(ty) = ann.clone().or_else(|| connective_type(name)) {
                    return Ok(Term::constant(name.clone(), ty));
                }
                Err(ParseError::Underdetermined(name.clone()))
            }
            Raw::Free(name, ty) => Ok(Term::var(name.clone(), ty.clone())),
            Raw::Poly(name, inst) => self.poly(name, inst),
            Raw::Abs(var, ty, body) => {
                self.scope.push((var.clone(), ty.clone()));
                let b = self.synth(body);
                self.scope.pop();
                Ok(Term::abs(var.clone(), ty.clone(), b?))
            }
            Raw::App(f, a) => {
                let f = self.synth(f)?;
                let tf = super::term::lenient_type(&f).map_err(|_| ParseError::Underdetermined(f.untyped()))?;
                match tf {
                    SemType::Arrow(dom, _) => {
                        let a = self.check(a, &dom)?;
                        Ok(Term::app(f, a))
                    }
                    other => Self::mismatch(&SemType::arrow(SemType::var("_"), SemType::var("_")), &other, &f.untyped()),
                }
            }
        }
    }

    fn check(&mut self, raw: &Raw, expected: &SemType) -> Result<Term, ParseError> {
        match raw {
            Raw::Name(name, None)
                if self.lookup(name).is_none() && !self.sig.poly.contains_key(name) && connective_type(name).is_none() =>
            {
                if is_quantifier(name) {
                    let ok = matches!(expected.as_arrow(), Some((dom, cod))
                        if cod.is_prop() && dom.as_arrow().is_some_and(|(_, r)| r.is_prop()));
                    if !ok {
                        return Self::mismatch(
                            &SemType::arrow(SemType::arrow(SemType::var("s"), SemType::t()), SemType::t()),
                            expected,
                            name,
                        );
                    }
                }
                Ok(Term::constant(name.clone(), expected.clone()))
            }
            Raw::Abs(var, ty, body) => {
                let Some((dom, cod)) = expected.as_arrow() else {
                    return Self::mismatch(expected, &SemType::arrow(ty.clone(), SemType::var("_")), var);
                };
                if !erased_eq(dom, ty) {
                    return Self::mismatch(dom, ty, var);
                }
                let cod = cod.clone();
                self.scope.push((var.clone(), ty.clone()));
                let b = self.check(body, &cod);
                self.scope.pop();
                Ok(Term::abs(var.clone(), ty.clone(), b?))
            }
            Raw::App(f, a)
                if expected.is_prop()
                    && matches!(&**f, Raw::Name(q, None) if is_quantifier(q) && self.lookup(q).is_none())
                    && matches!(&**a, Raw::Abs(..)) =>
            {
                let (Raw::Name(q, _), Raw::Abs(_, dom, _)) = (&**f, &**a) else {
                    unreachable!("guarded above")
                };
                let pred = SemType::arrow(dom.clone(), SemType::t());
                let arg = self.check(a, &pred)?;
                Ok(Term::app(Term::constant(q.clone(), SemType::arrow(pred, SemType::t())), arg))
            }
            Raw::App(f, a) => match self.synth(f) {
                Ok(f) => {
                    let tf = super::term::lenient_type(&f).map_err(|_| ParseError::Underdetermined(f.untyped()))?;
                    let Some((dom, cod)) = tf.as_arrow() else {
                        return Self::mismatch(&SemType::arrow(SemType::var("_"), expected.clone()), &tf, &f.untyped());
                    };
                    if !erased_eq(cod, expected) {
                        return Self::mismatch(expected, cod, &f.untyped());
                    }
                    let dom = dom.clone();
                    let a = self.check(a, &dom)?;
                    Ok(Term::app(f, a))
                }
                Err(ParseError::Underdetermined(_)) => {
                    let a = self.synth(a)?;
                    let ta = super::term::lenient_type(&a).map_err(|_| ParseError::Underdetermined(a.untyped()))?;
                    let f = self.check(f, &SemType::arrow(ta, expected.clone()))?;
                    Ok(Term::app(f, a))
                }
                Err(e) => Err(e),
            },
            _ => {
                let term = self.synth(raw)?;
                let ty = super::term::lenient_type(&term).map_err(|_| ParseError::Underdetermined(term.untyped()))?;
                if !erased_eq(&ty, expected) {
                    return Self::mismatch(expected, &ty, &term.untyped());
                }
                Ok(term)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::term::{alpha_eq, infer};

    fn sig() -> Signature {
        Signature::new(["dog", "human"]).with_poly(
            "the",
            SemType::arrow(SemType::arrow(SemType::var("a"), SemType::t()), SemType::var("a")),
        )
    }

    #[test]
    fn parses_types() {
        let s = sig();
        assert_eq!(parse_type("(e->t)->t", &s).unwrap().to_string(), "(e->t)->t");
        assert_eq!(parse_type("e → e → t", &s).unwrap().to_string(), "e->e->t");
        assert_eq!(parse_type("cat", &s), Err(ParseError::SortUndeclared("cat".into())));
    }

    #[test]
    fn bare_constants_take_expected_type() {
        let s = sig();
        let et = parse_type("e->t", &s).unwrap();
        let kid = parse_term("\\x:e. (kid x)", &s, Some(&et)).unwrap();
        assert_eq!(infer(&kid).unwrap(), et);
        let every = parse_term(
            "\\P:e->t. \\Q:e->t. (forall (\\x:e. (implies (P x) (Q x))))",
            &s,
            Some(&parse_type("(e->t)->(e->t)->t", &s).unwrap()),
        )
        .unwrap();
        assert_eq!(infer(&every).unwrap().to_string(), "(e->t)->(e->t)->t");
    }

    #[test]
    fn sorted_binder_types_constant() {
        let s = sig();
        let bark = parse_term("\\x:dog. (bark x)", &s, Some(&parse_type("e->t", &s).unwrap())).unwrap();
        assert_eq!(infer(&bark).unwrap().to_string(), "dog->t");
    }

    #[test]
    fn display_round_trips() {
        let s = sig();
        let text = "\\P:e->t. (exists (\\x:e. (and (P x) (cartoon x))))";
        let term = parse_term(text, &s, Some(&parse_type("(e->t)->t", &s).unwrap())).unwrap();
        let again = parse_term(&term.to_string(), &s, None).unwrap();
        assert_eq!(term, again);
        let the = parse_term("the{a=human}", &s, None).unwrap();
        assert_eq!(parse_term(&the.to_string(), &s, None).unwrap(), the);
        let free = parse_term("(f:(e->t) ?y:e)", &s, None).unwrap();
        assert!(alpha_eq(&free, &parse_term(&free.to_string(), &s, None).unwrap()));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let s = sig();
        assert!(matches!(parse_term("(kid x", &s, None), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_term("kid", &s, None), Err(ParseError::Underdetermined(_))));
    }
}
