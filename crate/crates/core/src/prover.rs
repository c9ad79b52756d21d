//! Cut-free proof search for the product-free Lambek calculus with
//! Curry-Howard term extraction.
//!
//! The search is focused: goals are decomposed by the invertible right rules
//! first, and an atomic goal is proved by choosing one antecedent formula and
//! decomposing it hereditarily down to an atomic axiom. Focused proofs are in
//! one-to-one correspondence with beta-normal, eta-long linear terms, so every
//! reading is produced once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{sem_type, Category, CategoryError, SortMap};
use crate::lambda::{equivalence_key, Nameless, SemType, Term};
use crate::lexicon::{Lexicon, LexiconError};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverOptions {
    /// Drop the non-empty antecedent restriction.
    pub allow_empty_antecedent: bool,
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions {
            allow_empty_antecedent: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("search limit of {budget} nodes exceeded")]
    SearchLimitExceeded { budget: u64 },
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("malformed proof: {0}")]
    MalformedProof(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub antecedent: Vec<Category>,
    pub goal: Category,
}

impl Sequent {
    pub fn new(antecedent: Vec<Category>, goal: Category) -> Self {
        Sequent { antecedent, goal }
    }

    /// Every atom occurs as often positively as negatively.
    pub fn is_balanced(&self) -> bool {
        balanced(&self.antecedent, &self.goal)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ants: Vec<String> = self.antecedent.iter().map(|c| c.to_string()).collect();
        write!(f, "{} ⊢ {}", ants.join(", "), self.goal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Axiom,
    /// Left rule for `A\B`.
    UnderE,
    /// Right rule for `A\B`.
    UnderI,
    /// Left rule for `B/A`.
    OverE,
    /// Right rule for `B/A`.
    OverI,
}

impl Rule {
    fn label(self) -> &'static str {
        match self {
            Rule::Axiom => "ax",
            Rule::UnderE => "\\L",
            Rule::UnderI => "\\R",
            Rule::OverE => "/L",
            Rule::OverI => "/R",
        }
    }
}

/// A sequent proof. Left rules record the antecedent position of the
/// principal formula and have the argument proof as first premise; right
/// rules record the discharged hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Proof {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<Arc<Proof>>,
    pub discharged: Option<Category>,
    pub principal: Option<usize>,
}

impl Proof {
    /// Compact prefix encoding, used as a deterministic sort key.
    pub fn encoding(&self) -> String {
        let mut out = String::new();
        self.encode(&mut out);
        out
    }

    fn encode(&self, out: &mut String) {
        out.push_str(self.rule.label());
        if let Some(i) = self.principal {
            out.push_str(&i.to_string());
        }
        if !self.premises.is_empty() {
            out.push('(');
            for (k, p) in self.premises.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                p.encode(out);
            }
            out.push(')');
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        write!(f, "{:indent$}[{}] {}", "", self.rule.label(), self.conclusion)?;
        if let Some(i) = self.principal {
            write!(f, "  (principal {i})")?;
        }
        if let Some(d) = &self.discharged {
            write!(f, "  (discharge {d})")?;
        }
        writeln!(f)?;
        for p in &self.premises {
            p.write_tree(f, indent + 2)?;
        }
        Ok(())
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

/// A proof together with its extracted term. Free variables `w0, w1, ...`
/// stand for the antecedent formulas in order.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub proof: Arc<Proof>,
    pub term: Term,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_entries: usize,
}

fn balanced(ctx: &[Category], goal: &Category) -> bool {
    let mut counts = BTreeMap::new();
    goal.polarity_counts(true, &mut counts);
    for c in ctx {
        c.polarity_counts(false, &mut counts);
    }
    counts.values().all(|&v| v == 0)
}

pub fn hypothesis_name(i: usize) -> String {
    format!("w{i}")
}

fn slot(k: usize, ty: SemType) -> Term {
    Term::var(format!("#{k}"), ty)
}

fn slot_index(name: &str) -> Option<usize> {
    name.strip_prefix('#').and_then(|s| s.parse().ok())
}

/// Replace every positional variable `#k` by `f(k, ty)`. Binders are never
/// positional, so no capture can occur.
fn remap(term: &Term, f: &impl Fn(usize, &SemType) -> Term) -> Term {
    match term {
        Term::Var { name, ty } => match slot_index(name) {
            Some(k) => f(k, ty),
            None => term.clone(),
        },
        Term::App(a, b) => Term::app(remap(a, f), remap(b, f)),
        Term::Abs { var, ty, body } => Term::abs(var.clone(), ty.clone(), remap(body, f)),
        Term::Const { .. } | Term::Poly { .. } => term.clone(),
    }
}

type Memo<K> = HashMap<K, Rc<Vec<Derivation>>>;

struct Search<'a> {
    sorts: &'a SortMap,
    opts: ProverOptions,
    nodes: u64,
    fresh: usize,
    goals: Memo<(Vec<Category>, Category)>,
    foci: Memo<(Vec<Category>, usize, String)>,
}

impl<'a> Search<'a> {
    fn new(sorts: &'a SortMap, opts: ProverOptions) -> Self {
        Search {
            sorts,
            opts,
            nodes: 0,
            fresh: 0,
            goals: HashMap::new(),
            foci: HashMap::new(),
        }
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            memo_entries: self.goals.len() + self.foci.len(),
        }
    }

    fn tick(&mut self) -> Result<(), ProverError> {
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            return Err(ProverError::SearchLimitExceeded {
                budget: self.opts.budget,
            });
        }
        Ok(())
    }

    fn ty(&self, c: &Category) -> Result<SemType, ProverError> {
        Ok(sem_type(c, self.sorts)?)
    }

    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("h{}", self.fresh)
    }

    fn prove(&mut self, ctx: &[Category], goal: &Category) -> Result<Rc<Vec<Derivation>>, ProverError> {
        let key = (ctx.to_vec(), goal.clone());
        if let Some(hit) = self.goals.get(&key) {
            return Ok(hit.clone());
        }
        self.tick()?;
        let mut out = Vec::new();
        let allowed = !ctx.is_empty() || self.opts.allow_empty_antecedent;
        if allowed && balanced(ctx, goal) {
            let conclusion = Sequent::new(ctx.to_vec(), goal.clone());
            match goal {
                Category::Under(a, b) => {
                    let mut ext = vec![(**a).clone()];
                    ext.extend_from_slice(ctx);
                    let ty = self.ty(a)?;
                    for d in self.prove(&ext, b)?.iter() {
                        let h = self.fresh_name();
                        let hv = Term::var(h.clone(), ty.clone());
                        let body = remap(&d.term, &|k, t| if k == 0 { hv.clone() } else { slot(k - 1, t.clone()) });
                        out.push(Derivation {
                            proof: Arc::new(Proof {
                                conclusion: conclusion.clone(),
                                rule: Rule::UnderI,
                                premises: vec![d.proof.clone()],
                                discharged: Some((**a).clone()),
                                principal: None,
                            }),
                            term: Term::abs(h, ty.clone(), body),
                        });
                    }
                }
                Category::Over(b, a) => {
                    let mut ext = ctx.to_vec();
                    ext.push((**a).clone());
                    let n = ctx.len();
                    let ty = self.ty(a)?;
                    for d in self.prove(&ext, b)?.iter() {
                        let h = self.fresh_name();
                        let hv = Term::var(h.clone(), ty.clone());
                        let body = remap(&d.term, &|k, t| if k == n { hv.clone() } else { slot(k, t.clone()) });
                        out.push(Derivation {
                            proof: Arc::new(Proof {
                                conclusion: conclusion.clone(),
                                rule: Rule::OverI,
                                premises: vec![d.proof.clone()],
                                discharged: Some((**a).clone()),
                                principal: None,
                            }),
                            term: Term::abs(h, ty.clone(), body),
                        });
                    }
                }
                Category::Atom(p) => {
                    for i in 0..ctx.len() {
                        out.extend(self.focus(ctx, i, p)?.iter().cloned());
                    }
                }
            }
        }
        let out = Rc::new(dedup(out));
        self.goals.insert(key, out.clone());
        Ok(out)
    }

    /// Proofs of `ctx ⊢ p` whose last rules decompose `ctx[i]`.
    fn focus(&mut self, ctx: &[Category], i: usize, p: &str) -> Result<Rc<Vec<Derivation>>, ProverError> {
        let key = (ctx.to_vec(), i, p.to_string());
        if let Some(hit) = self.foci.get(&key) {
            return Ok(hit.clone());
        }
        self.tick()?;
        let mut out = Vec::new();
        let goal = Category::atom(p);
        let min = usize::from(!self.opts.allow_empty_antecedent);
        let conclusion = Sequent::new(ctx.to_vec(), goal.clone());
        if balanced(ctx, &goal) {
            let head_ty = self.ty(&ctx[i])?;
            match &ctx[i] {
                Category::Atom(q) => {
                    if q == p && ctx.len() == 1 {
                        out.push(Derivation {
                            proof: Arc::new(Proof {
                                conclusion,
                                rule: Rule::Axiom,
                                premises: Vec::new(),
                                discharged: None,
                                principal: None,
                            }),
                            term: slot(0, head_ty),
                        });
                    }
                }
                Category::Over(b, a) => {
                    for dlen in min..=ctx.len() - i - 1 {
                        let mut rest = ctx[..i].to_vec();
                        rest.push((**b).clone());
                        rest.extend_from_slice(&ctx[i + 1 + dlen..]);
                        if !balanced(&rest, &goal) {
                            continue;
                        }
                        let args = self.prove(&ctx[i + 1..i + 1 + dlen], a)?;
                        if args.is_empty() {
                            continue;
                        }
                        let rests = self.focus(&rest, i, p)?;
                        for arg in args.iter() {
                            let head = Term::app(
                                slot(i, head_ty.clone()),
                                remap(&arg.term, &|k, t| slot(k + i + 1, t.clone())),
                            );
                            for r in rests.iter() {
                                let term = remap(&r.term, &|k, t| match k.cmp(&i) {
                                    std::cmp::Ordering::Equal => head.clone(),
                                    std::cmp::Ordering::Greater => slot(k + dlen, t.clone()),
                                    std::cmp::Ordering::Less => slot(k, t.clone()),
                                });
                                out.push(Derivation {
                                    proof: Arc::new(Proof {
                                        conclusion: conclusion.clone(),
                                        rule: Rule::OverE,
                                        premises: vec![arg.proof.clone(), r.proof.clone()],
                                        discharged: None,
                                        principal: Some(i),
                                    }),
                                    term,
                                });
                            }
                        }
                    }
                }
                Category::Under(a, b) => {
                    for dlen in min..=i {
                        let start = i - dlen;
                        let mut rest = ctx[..start].to_vec();
                        rest.push((**b).clone());
                        rest.extend_from_slice(&ctx[i + 1..]);
                        if !balanced(&rest, &goal) {
                            continue;
                        }
                        let args = self.prove(&ctx[start..i], a)?;
                        if args.is_empty() {
                            continue;
                        }
                        let rests = self.focus(&rest, start, p)?;
                        for arg in args.iter() {
                            let head = Term::app(
                                slot(i, head_ty.clone()),
                                remap(&arg.term, &|k, t| slot(k + start, t.clone())),
                            );
                            for r in rests.iter() {
                                let term = remap(&r.term, &|k, t| match k.cmp(&start) {
                                    std::cmp::Ordering::Equal => head.clone(),
                                    std::cmp::Ordering::Greater => slot(k + dlen, t.clone()),
                                    std::cmp::Ordering::Less => slot(k, t.clone()),
                                });
                                out.push(Derivation {
                                    proof: Arc::new(Proof {
                                        conclusion: conclusion.clone(),
                                        rule: Rule::UnderE,
                                        premises: vec![arg.proof.clone(), r.proof.clone()],
                                        discharged: None,
                                        principal: Some(i),
                                    }),
                                    term,
                                });
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(dedup(out));
        self.foci.insert(key, out.clone());
        Ok(out)
    }

    fn finish(&self, derivations: &[Derivation]) -> Vec<Derivation> {
        let mut out: Vec<Derivation> = derivations
            .iter()
            .map(|d| Derivation {
                proof: d.proof.clone(),
                term: remap(&d.term, &|k, t| Term::var(hypothesis_name(k), t.clone())),
            })
            .collect();
        out.sort_by_cached_key(|d| d.proof.encoding());
        out
    }
}

fn dedup(derivations: Vec<Derivation>) -> Vec<Derivation> {
    let mut seen: HashMap<Nameless, ()> = HashMap::new();
    derivations
        .into_iter()
        .filter(|d| seen.insert(equivalence_key(&d.term), ()).is_none())
        .collect()
}

/// All focused proofs of a sequent, one per distinct term, sorted by proof
/// encoding.
pub fn prove_sequent(
    sequent: &Sequent,
    sorts: &SortMap,
    opts: &ProverOptions,
) -> Result<(Vec<Derivation>, SearchStats), ProverError> {
    let mut search = Search::new(sorts, *opts);
    let found = search.prove(&sequent.antecedent, &sequent.goal)?;
    Ok((search.finish(&found), search.stats()))
}

/// Read the Curry-Howard term off a proof tree. Free variables are
/// `w0, w1, ...` for the antecedent formulas.
pub fn extract_term(proof: &Proof, sorts: &SortMap) -> Result<Term, ProverError> {
    let env = proof
        .conclusion
        .antecedent
        .iter()
        .enumerate()
        .map(|(i, c)| Ok(Term::var(hypothesis_name(i), sem_type(c, sorts)?)))
        .collect::<Result<Vec<_>, ProverError>>()?;
    let mut counter = 0;
    walk(proof, &env, sorts, &mut counter)
}

fn walk(proof: &Proof, env: &[Term], sorts: &SortMap, counter: &mut usize) -> Result<Term, ProverError> {
    let bad = |m: &str| ProverError::MalformedProof(format!("{m} at {}", proof.conclusion));
    if env.len() != proof.conclusion.antecedent.len() {
        return Err(bad("environment size mismatch"));
    }
    match proof.rule {
        Rule::Axiom => match env {
            [only] => Ok(only.clone()),
            _ => Err(bad("axiom with more than one hypothesis")),
        },
        Rule::UnderI | Rule::OverI => {
            let [premise] = proof.premises.as_slice() else {
                return Err(bad("right rule needs one premise"));
            };
            let a = proof.discharged.as_ref().ok_or_else(|| bad("missing discharged formula"))?;
            let ty = sem_type(a, sorts)?;
            *counter += 1;
            let h = format!("v{counter}");
            let hv = Term::var(h.clone(), ty.clone());
            let mut inner = env.to_vec();
            if proof.rule == Rule::UnderI {
                inner.insert(0, hv);
            } else {
                inner.push(hv);
            }
            Ok(Term::abs(h, ty, walk(premise, &inner, sorts, counter)?))
        }
        Rule::OverE | Rule::UnderE => {
            let [arg, rest] = proof.premises.as_slice() else {
                return Err(bad("left rule needs two premises"));
            };
            let i = proof.principal.ok_or_else(|| bad("missing principal position"))?;
            let dlen = arg.conclusion.antecedent.len();
            let (start, end) = if proof.rule == Rule::OverE {
                (i + 1, i + 1 + dlen)
            } else {
                (i.checked_sub(dlen).ok_or_else(|| bad("argument overruns antecedent"))?, i)
            };
            if end > env.len() || i >= env.len() {
                return Err(bad("argument overruns antecedent"));
            }
            let head = Term::app(env[i].clone(), walk(arg, &env[start..end], sorts, counter)?);
            let mut inner: Vec<Term> = env[..start.min(i)].to_vec();
            inner.push(head);
            inner.extend_from_slice(&env[end.max(i + 1)..]);
            walk(rest, &inner, sorts, counter)
        }
    }
}

/// One syntactic analysis of a word string.
#[derive(Clone, Debug)]
pub struct Parse {
    pub words: Vec<String>,
    pub assignment: Vec<Category>,
    /// Other category assignments yielding the same term.
    pub alternatives: Vec<Vec<Category>>,
    pub proof: Arc<Proof>,
    /// Derivational term over `w0, w1, ...`, one variable per word.
    pub term: Term,
}

#[derive(Clone, Debug)]
pub struct Parses {
    pub parses: Vec<Parse>,
    pub stats: SearchStats,
}

/// Parse a word string against `goal` under every category assignment the
/// lexicon allows. One search (and one budget) is shared by all
/// assignments.
pub fn enumerate_parses(
    words: &[String],
    lexicon: &Lexicon,
    goal: &Category,
    opts: &ProverOptions,
) -> Result<Parses, ProverError> {
    let choices = words
        .iter()
        .map(|w| {
            lexicon.categories(w).map_err(|e| match e {
                LexiconError::UnknownWord(w) => ProverError::UnknownWord(w),
                other => ProverError::MalformedProof(other.to_string()),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut search = Search::new(&lexicon.base, *opts);
    let mut parses: Vec<Parse> = Vec::new();
    let mut index: HashMap<Nameless, usize> = HashMap::new();
    if words.is_empty() {
        return Ok(Parses {
            parses,
            stats: search.stats(),
        });
    }
    for assignment in cartesian(&choices) {
        let found = search.prove(&assignment, goal)?;
        for d in search.finish(&found) {
            let key = equivalence_key(&d.term);
            match index.get(&key) {
                Some(&k) => {
                    if parses[k].assignment != assignment && !parses[k].alternatives.contains(&assignment) {
                        parses[k].alternatives.push(assignment.clone());
                    }
                }
                None => {
                    index.insert(key, parses.len());
                    parses.push(Parse {
                        words: words.to_vec(),
                        assignment: assignment.clone(),
                        alternatives: Vec::new(),
                        proof: d.proof,
                        term: d.term,
                    });
                }
            }
        }
    }
    Ok(Parses {
        parses,
        stats: search.stats(),
    })
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    })
}
