//! Combined syntactic/semantic lexicon: categories, sorted lambda terms,
//! sort declarations, polymorphic constants and word-owned coercions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{parse_category_with, sem_type, Category, SortMap};
use crate::lambda::{
    classify_occurrences, lenient_type, parse_term, parse_type, OccurrenceClass, ParseError, SemType, Signature,
    Term, ENTITY, PROP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rigidity {
    Rigid,
    Flexible,
}

/// A coercion constant `name : source -> target` provided by `owner`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coercion {
    pub owner: String,
    pub name: String,
    pub source: String,
    pub target: String,
    pub rigidity: Rigidity,
}

impl Coercion {
    pub fn ty(&self) -> SemType {
        SemType::arrow(SemType::sort(&self.source), SemType::sort(&self.target))
    }

    pub fn constant(&self) -> Term {
        Term::constant(self.name.clone(), self.ty())
    }

    pub fn is_rigid(&self) -> bool {
        self.rigidity == Rigidity::Rigid
    }
}

impl fmt::Display for Coercion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}->{} ({}, {:?})", self.name, self.source, self.target, self.owner, self.rigidity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sense {
    pub category: Category,
    pub term: Term,
    /// Sorted type of the term (argument sorts of inner applications are
    /// not required to agree).
    pub ty: SemType,
    /// Flagged as a generalized quantifier in the lexicon file.
    pub quantifier: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub senses: Vec<Sense>,
    pub coercions: Vec<Coercion>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    pub sorts: BTreeSet<String>,
    pub base: SortMap,
    pub poly: BTreeMap<String, SemType>,
    pub entries: BTreeMap<String, LexEntry>,
    /// Coercions not owned by any word; consulted only when enabled.
    pub global_coercions: Vec<Coercion>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    SchemaError,
    SortUndeclared,
    CategorySyntaxError,
    TermSyntaxError,
    TypeErasureMismatch,
    NonLinearTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub word: Option<String>,
    pub sense: Option<usize>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} [{:?}]", self.kind)?;
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " at line {l}, column {c}")?;
        }
        if let Some(w) = &self.word {
            write!(f, " word `{w}`")?;
        }
        if let Some(s) = self.sense {
            write!(f, " sense {s}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid lexicon: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
}

impl LexiconError {
    pub fn kinds(&self) -> Vec<DiagnosticKind> {
        match self {
            LexiconError::Invalid(ds) => ds.iter().map(|d| d.kind).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconDoc {
    sorts: Vec<String>,
    #[serde(default)]
    base_categories: Vec<BaseDoc>,
    #[serde(default)]
    poly_constants: Vec<PolyDoc>,
    words: Vec<WordDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    global_coercions: Vec<CoercionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseDoc {
    name: String,
    sem_type: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDoc {
    name: String,
    schema: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WordDoc {
    word: String,
    senses: Vec<SenseDoc>,
    #[serde(default)]
    coercions: Vec<CoercionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SenseDoc {
    category: String,
    term: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    quantifier: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoercionDoc {
    name: String,
    source: String,
    target: String,
    rigid: bool,
}

struct Builder {
    diags: Vec<Diagnostic>,
}

impl Builder {
    fn error(&mut self, kind: DiagnosticKind, word: Option<&str>, sense: Option<usize>, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            severity: Severity::Error,
            kind,
            word: word.map(str::to_string),
            sense,
            line: None,
            column: None,
            message: message.into(),
        });
    }

    fn warn(&mut self, kind: DiagnosticKind, word: &str, sense: usize, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            severity: Severity::Warning,
            kind,
            word: Some(word.to_string()),
            sense: Some(sense),
            line: None,
            column: None,
            message: message.into(),
        });
    }

    fn coercion(&mut self, doc: &CoercionDoc, owner: &str, sorts: &BTreeSet<String>) -> Option<Coercion> {
        let mut ok = true;
        for s in [&doc.source, &doc.target] {
            if !sorts.contains(s) || s == PROP {
                self.error(
                    DiagnosticKind::SortUndeclared,
                    Some(owner),
                    None,
                    format!("coercion `{}` uses undeclared sort `{s}`", doc.name),
                );
                ok = false;
            }
        }
        if ok && doc.source == doc.target {
            self.error(
                DiagnosticKind::SchemaError,
                Some(owner),
                None,
                format!("coercion `{}` has identical source and target", doc.name),
            );
            ok = false;
        }
        ok.then(|| Coercion {
            owner: owner.to_string(),
            name: doc.name.clone(),
            source: doc.source.clone(),
            target: doc.target.clone(),
            rigidity: if doc.rigid { Rigidity::Rigid } else { Rigidity::Flexible },
        })
    }
}

fn type_diag(err: &ParseError) -> DiagnosticKind {
    match err {
        ParseError::SortUndeclared(_) => DiagnosticKind::SortUndeclared,
        ParseError::Type { .. } => DiagnosticKind::TypeErasureMismatch,
        _ => DiagnosticKind::TermSyntaxError,
    }
}

/// Parse and validate a lexicon document (JSON). Warnings are returned with
/// the lexicon; any error makes the whole load fail with every diagnostic.
pub fn load_lexicon(document: &str) -> Result<(Lexicon, Vec<Diagnostic>), LexiconError> {
    let doc: LexiconDoc = serde_json::from_str(document).map_err(|e| {
        LexiconError::Invalid(vec![Diagnostic {
            severity: Severity::Error,
            kind: DiagnosticKind::SchemaError,
            word: None,
            sense: None,
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        }])
    })?;
    let mut b = Builder { diags: Vec::new() };

    let mut sorts: BTreeSet<String> = doc.sorts.iter().cloned().collect();
    sorts.insert(ENTITY.to_string());
    sorts.insert(PROP.to_string());
    let mut sig = Signature::new(sorts.iter().cloned());

    let mut base = SortMap::default();
    for bd in &doc.base_categories {
        match parse_type(&bd.sem_type, &sig) {
            Ok(ty) => {
                base.0.insert(bd.name.clone(), ty);
            }
            Err(e) => b.error(type_diag(&e), None, None, format!("base category `{}`: {e}", bd.name)),
        }
    }
    for pd in &doc.poly_constants {
        match parse_type(&pd.schema, &sig) {
            Ok(ty) => sig.poly.insert(pd.name.clone(), ty).map_or((), |_| {
                b.error(
                    DiagnosticKind::SchemaError,
                    None,
                    None,
                    format!("duplicate polymorphic constant `{}`", pd.name),
                )
            }),
            Err(e) => b.error(type_diag(&e), None, None, format!("polymorphic constant `{}`: {e}", pd.name)),
        }
    }

    let atoms = base.atoms();
    let mut entries = BTreeMap::new();
    for wd in &doc.words {
        let word = wd.word.to_lowercase();
        if entries.contains_key(&word) {
            b.error(DiagnosticKind::SchemaError, Some(&word), None, "duplicate word entry");
            continue;
        }
        if wd.senses.is_empty() {
            b.error(DiagnosticKind::SchemaError, Some(&word), None, "word has no senses");
        }
        let mut senses = Vec::new();
        for (i, sd) in wd.senses.iter().enumerate() {
            let category = match parse_category_with(&sd.category, &atoms) {
                Ok(c) => c,
                Err(e) => {
                    b.error(DiagnosticKind::CategorySyntaxError, Some(&word), Some(i), e.to_string());
                    continue;
                }
            };
            let expected = sem_type(&category, &base).expect("atoms were validated by the parser");
            let term = match parse_term(&sd.term, &sig, Some(&expected)) {
                Ok(t) => t,
                Err(e) => {
                    b.error(type_diag(&e), Some(&word), Some(i), e.to_string());
                    continue;
                }
            };
            if !term.is_closed() {
                b.error(DiagnosticKind::TermSyntaxError, Some(&word), Some(i), "lexical term has free variables");
                continue;
            }
            let ty = match lenient_type(&term) {
                Ok(ty) if ty.erase() == expected.erase() => ty,
                Ok(ty) => {
                    b.error(
                        DiagnosticKind::TypeErasureMismatch,
                        Some(&word),
                        Some(i),
                        format!("term type {ty} does not erase to {expected}"),
                    );
                    continue;
                }
                Err(e) => {
                    b.error(DiagnosticKind::TypeErasureMismatch, Some(&word), Some(i), e.to_string());
                    continue;
                }
            };
            let class = classify_occurrences(&term);
            if matches!(class, OccurrenceClass::Affine | OccurrenceClass::Unrestricted) {
                b.warn(DiagnosticKind::NonLinearTerm, &word, i, format!("lexical term is {class}"));
            }
            senses.push(Sense {
                category,
                term,
                ty,
                quantifier: sd.quantifier,
            });
        }
        let coercions = wd.coercions.iter().filter_map(|c| b.coercion(c, &word, &sorts)).collect();
        entries.insert(
            word.clone(),
            LexEntry {
                word,
                senses,
                coercions,
            },
        );
    }
    let global_coercions = doc
        .global_coercions
        .iter()
        .filter_map(|c| b.coercion(c, "*", &sorts))
        .collect();

    if b.diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(LexiconError::Invalid(b.diags));
    }
    Ok((
        Lexicon {
            sorts,
            base,
            poly: sig.poly,
            entries,
            global_coercions,
        },
        b.diags,
    ))
}

pub fn load_lexicon_file(path: &Path) -> Result<(Lexicon, Vec<Diagnostic>), LexiconError> {
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_lexicon(&text)
}

impl Lexicon {
    pub fn signature(&self) -> Signature {
        Signature {
            sorts: self.sorts.clone(),
            poly: self.poly.clone(),
        }
    }

    pub fn entry(&self, word: &str) -> Result<&LexEntry, LexiconError> {
        self.entries
            .get(&word.to_lowercase())
            .ok_or_else(|| LexiconError::UnknownWord(word.to_string()))
    }

    /// Distinct categories of a word, in sense order.
    pub fn categories(&self, word: &str) -> Result<Vec<Category>, LexiconError> {
        let mut out: Vec<Category> = Vec::new();
        for s in &self.entry(word)?.senses {
            if !out.contains(&s.category) {
                out.push(s.category.clone());
            }
        }
        Ok(out)
    }

    pub fn senses(&self) -> impl Iterator<Item = (&str, &Sense)> {
        self.entries
            .values()
            .flat_map(|e| e.senses.iter().map(move |s| (e.word.as_str(), s)))
    }

    /// Copy of the lexicon with every coercion made rigid or flexible.
    pub fn with_rigidity(&self, word: &str, name: &str, rigidity: Rigidity) -> Lexicon {
        let mut out = self.clone();
        if let Some(e) = out.entries.get_mut(&word.to_lowercase()) {
            for c in e.coercions.iter_mut().filter(|c| c.name == name) {
                c.rigidity = rigidity;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let coercion_doc = |c: &Coercion| CoercionDoc {
            name: c.name.clone(),
            source: c.source.clone(),
            target: c.target.clone(),
            rigid: c.is_rigid(),
        };
        let doc = LexiconDoc {
            sorts: self
                .sorts
                .iter()
                .filter(|s| *s != ENTITY && *s != PROP)
                .cloned()
                .collect(),
            base_categories: self
                .base
                .0
                .iter()
                .map(|(name, ty)| BaseDoc {
                    name: name.clone(),
                    sem_type: ty.to_string(),
                })
                .collect(),
            poly_constants: self
                .poly
                .iter()
                .map(|(name, schema)| PolyDoc {
                    name: name.clone(),
                    schema: schema.to_string(),
                })
                .collect(),
            words: self
                .entries
                .values()
                .map(|e| WordDoc {
                    word: e.word.clone(),
                    senses: e
                        .senses
                        .iter()
                        .map(|s| SenseDoc {
                            category: s.category.to_string(),
                            term: s.term.to_string(),
                            quantifier: s.quantifier,
                        })
                        .collect(),
                    coercions: e.coercions.iter().map(coercion_doc).collect(),
                })
                .collect(),
            global_coercions: self.global_coercions.iter().map(coercion_doc).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("lexicon documents always serialize")
    }
}

/// Coercions owned by the words of a phrase, in word order, each tagged with
/// its owner. Repeated words contribute repeatedly.
pub fn phrase_coercions(lexicon: &Lexicon, words: &[String]) -> Result<Vec<Coercion>, LexiconError> {
    let mut out = Vec::new();
    for w in words {
        out.extend(lexicon.entry(w)?.coercions.iter().cloned());
    }
    Ok(out)
}
