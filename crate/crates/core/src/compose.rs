//! From parses to readings: lexical substitution, sort-mismatch detection,
//! coercion repair under rigidity, normalization and deduplication.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::category::Category;
use crate::lambda::{
    equivalence_key, infer, lenient_type, normalize, subst_unchecked, type_of, NormalForm, Nameless, Path, SemType,
    Step, Term, TypeError, Unifier, ENTITY,
};
use crate::lexicon::{phrase_coercions, Coercion, Lexicon, LexiconError};
use crate::prover::{enumerate_parses, hypothesis_name, Parse, ProverError, ProverOptions, SearchStats};

#[derive(Debug, Error)]
pub enum ComposeError {
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error("no sense of `{word}` has category {category}")]
    MissingSense { word: String, category: Category },
    #[error("no coercion chain of length at most {depth} from {found} to {expected}")]
    CoercionDepthExceeded {
        expected: String,
        found: String,
        depth: usize,
    },
    #[error("ill-formed derivational term: {0}")]
    IllFormed(#[from] TypeError),
}

impl From<LexiconError> for ComposeError {
    fn from(e: LexiconError) -> Self {
        match e {
            LexiconError::UnknownWord(w) => ComposeError::Prover(ProverError::UnknownWord(w)),
            other => ComposeError::Prover(ProverError::MalformedProof(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Ok,
    NoParse,
    ParseButNoSorting,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Ok => "OK",
            Outcome::NoParse => "NO_PARSE",
            Outcome::ParseButNoSorting => "PARSE_BUT_NO_SORTING",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposeOptions {
    pub prover: ProverOptions,
    /// When false no coercion is ever inserted.
    pub coercions: bool,
    /// Also consult the lexicon's global coercion table.
    pub global_coercions: bool,
    /// Longest coercion chain allowed at one site; 1 means single coercions.
    pub max_chain: usize,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            prover: ProverOptions::default(),
            coercions: true,
            global_coercions: false,
            max_chain: 1,
        }
    }
}

/// An application whose argument sort differs from the parameter sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MismatchSite {
    /// Path to the application node.
    pub location: Path,
    pub expected: String,
    pub found: String,
    pub candidates: Vec<Coercion>,
}

/// A mismatch that no sort coercion can repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatalMismatch {
    pub location: Path,
    pub expected: SemType,
    pub found: SemType,
}

/// One coercion (or chain, innermost first) inserted at a site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoercionUse {
    pub location: Path,
    pub expected: String,
    pub found: String,
    pub chain: Vec<Coercion>,
}

#[derive(Clone, Debug)]
pub struct Repair {
    pub term: Term,
    pub choices: Vec<CoercionUse>,
}

/// How a reading was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub assignment: Vec<Category>,
    pub proof: String,
    /// Sense index per word.
    pub senses: Vec<usize>,
    pub coercions: Vec<CoercionUse>,
}

#[derive(Clone, Debug)]
pub struct Reading {
    /// Closed, beta-normal, of type `t`, with canonical bound names.
    pub term: Term,
    pub provenance: Vec<Provenance>,
}

impl Reading {
    pub fn coercions(&self) -> &[CoercionUse] {
        &self.provenance[0].coercions
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub words: Vec<String>,
    pub outcome: Outcome,
    pub readings: Vec<Reading>,
    pub parses: Vec<Parse>,
    /// Substituted terms examined (parse x category assignment x senses).
    pub candidates: usize,
    pub search: SearchStats,
}

/// Give every type variable of a lexical term a fresh name and fill in the
/// open schema variables of polymorphic constants.
fn freshen(term: &Term, u: &mut Unifier) -> Term {
    fn vars_of(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var { ty, .. } | Term::Const { ty, .. } => out.extend(ty.vars()),
            Term::Poly { inst, .. } => inst.values().for_each(|v| out.extend(v.vars())),
            Term::App(f, a) => {
                vars_of(f, out);
                vars_of(a, out);
            }
            Term::Abs { ty, body, .. } => {
                out.extend(ty.vars());
                vars_of(body, out);
            }
        }
    }
    let mut names = BTreeSet::new();
    vars_of(term, &mut names);
    let map: BTreeMap<String, SemType> = names.into_iter().map(|v| (v.clone(), u.fresh(&v))).collect();
    fn go(t: &Term, map: &BTreeMap<String, SemType>, u: &mut Unifier) -> Term {
        match t {
            Term::Var { name, ty } => Term::var(name.clone(), ty.subst(map)),
            Term::Const { name, ty } => Term::constant(name.clone(), ty.subst(map)),
            Term::Poly { name, schema, inst } => {
                let mut full = BTreeMap::new();
                for v in schema.vars() {
                    let ty = match inst.get(&v) {
                        Some(ty) => ty.subst(map),
                        None => u.fresh(&v),
                    };
                    full.insert(v, ty);
                }
                Term::Poly {
                    name: name.clone(),
                    schema: schema.clone(),
                    inst: full,
                }
            }
            Term::App(f, a) => Term::app(go(f, map, u), go(a, map, u)),
            Term::Abs { var, ty, body } => Term::abs(var.clone(), ty.subst(map), go(body, map, u)),
        }
    }
    go(term, &map, u)
}

/// Replace each entity atom of a derivational type by a fresh variable.
fn shape(ty: &SemType, u: &mut Unifier) -> SemType {
    match ty {
        SemType::Sort(s) if s == ENTITY => u.fresh("h"),
        SemType::Arrow(a, b) => SemType::arrow(shape(a, u), shape(b, u)),
        other => other.clone(),
    }
}

/// Retype the derivational term: hypotheses take their lexical types,
/// binders take the parameter type of the function consuming their
/// abstraction (fresh variables otherwise), and every derivational
/// application unifies its parameter and argument types. Clashes are left
/// for mismatch detection.
fn retype(
    t: &Term,
    expected: Option<&SemType>,
    hyps: &HashMap<String, SemType>,
    env: &mut Vec<(String, SemType)>,
    u: &mut Unifier,
) -> Result<(Term, SemType), ComposeError> {
    match t {
        Term::Var { name, ty } => {
            let found = env.iter().rev().find(|(n, _)| n == name).map(|(_, ty)| ty.clone());
            let ty = found.or_else(|| hyps.get(name).cloned()).unwrap_or_else(|| ty.clone());
            Ok((Term::var(name.clone(), ty.clone()), ty))
        }
        Term::Const { ty, .. } => Ok((t.clone(), ty.clone())),
        Term::Poly { schema, inst, .. } => Ok((t.clone(), Term::poly_type(schema, inst))),
        Term::Abs { var, ty, body } => {
            let vty = shape(ty, u);
            let mut cod = None;
            if let Some(SemType::Arrow(d, c)) = expected.map(|e| u.resolve(e)) {
                let _ = u.unify(&vty, &d);
                cod = Some(*c);
            }
            env.push((var.clone(), vty.clone()));
            let r = retype(body, cod.as_ref(), hyps, env, u);
            env.pop();
            let (b, bty) = r?;
            Ok((Term::abs(var.clone(), vty.clone(), b), SemType::arrow(vty, bty)))
        }
        Term::App(f, a) => {
            let (f2, tf) = retype(f, None, hyps, env, u)?;
            let dom = match u.resolve(&tf) {
                SemType::Arrow(dom, _) => Some(*dom),
                _ => None,
            };
            let (a2, ta) = retype(a, dom.as_ref(), hyps, env, u)?;
            let cod = match u.resolve(&tf) {
                SemType::Arrow(dom, cod) => {
                    let _ = u.unify(&dom, &ta);
                    *cod
                }
                SemType::Var(_) => {
                    let (d, c) = (u.fresh("d"), u.fresh("c"));
                    let _ = u.unify(&tf, &SemType::arrow(d.clone(), c.clone()));
                    let _ = u.unify(&d, &ta);
                    c
                }
                found => {
                    return Err(TypeError::NotAFunction {
                        path: Vec::new(),
                        found,
                    }
                    .into())
                }
            };
            Ok((Term::app(f2, a2), cod))
        }
    }
}

/// Replace the hypothesis variables of a parse's term by the chosen lexical
/// terms (one sense index per word). The result may contain sort
/// mismatches.
pub fn substitute_lexical(parse: &Parse, lexicon: &Lexicon, senses: &[usize]) -> Result<Term, ComposeError> {
    let mut u = Unifier::new();
    let mut lexical = Vec::new();
    let mut hyps = HashMap::new();
    for (i, word) in parse.words.iter().enumerate() {
        let entry = lexicon.entry(word)?;
        let sense = senses.get(i).and_then(|&k| entry.senses.get(k)).ok_or_else(|| ComposeError::MissingSense {
            word: word.clone(),
            category: parse.assignment[i].clone(),
        })?;
        let term = freshen(&sense.term, &mut u);
        hyps.insert(hypothesis_name(i), lenient_type(&term)?);
        lexical.push(term);
    }
    let (deriv, _) = retype(&parse.term, None, &hyps, &mut Vec::new(), &mut u)?;
    let e = SemType::e();
    let ground = |t: &Term| t.map_types(&|ty| u.ground(ty, &e));
    let mut out = ground(&deriv);
    for (i, lex) in lexical.iter().enumerate() {
        out = subst_unchecked(&out, &hypothesis_name(i), &ground(lex));
    }
    Ok(out)
}

fn walk_sites(
    t: &Term,
    path: &mut Path,
    sites: &mut Vec<(Path, String, String)>,
) -> Result<(), FatalMismatch> {
    match t {
        Term::App(f, a) => {
            let fatal = |expected: SemType, found: SemType, path: &Path| FatalMismatch {
                location: path.clone(),
                expected,
                found,
            };
            let tf = lenient_type(f).map_err(|_| fatal(SemType::var("_"), SemType::var("_"), path))?;
            let ta = lenient_type(a).map_err(|_| fatal(SemType::var("_"), SemType::var("_"), path))?;
            match tf {
                SemType::Arrow(dom, _) if *dom == ta => {}
                SemType::Arrow(dom, _) => match (&*dom, &ta) {
                    (SemType::Sort(x), SemType::Sort(y)) if dom.is_entity_sort() && ta.is_entity_sort() => {
                        sites.push((path.clone(), x.clone(), y.clone()));
                    }
                    _ => return Err(fatal(*dom, ta, path)),
                },
                other => return Err(fatal(SemType::arrow(ta, SemType::var("_")), other, path)),
            }
            path.push(Step::Fun);
            walk_sites(f, path, sites)?;
            path.pop();
            path.push(Step::Arg);
            walk_sites(a, path, sites)?;
            path.pop();
            Ok(())
        }
        Term::Abs { body, .. } => {
            path.push(Step::Body);
            let r = walk_sites(body, path, sites);
            path.pop();
            r
        }
        _ => Ok(()),
    }
}

fn dedup_coercions(available: &[Coercion]) -> Vec<Coercion> {
    let mut seen = BTreeSet::new();
    available
        .iter()
        .filter(|c| seen.insert((c.owner.clone(), c.name.clone())))
        .cloned()
        .collect()
}

/// All application sites of `term` where an entity sort meets a different
/// entity sort, with the coercions from `available` that repair each one.
pub fn find_mismatches(term: &Term, available: &[Coercion]) -> Result<Vec<MismatchSite>, FatalMismatch> {
    let mut raw = Vec::new();
    walk_sites(term, &mut Vec::new(), &mut raw)?;
    let available = dedup_coercions(available);
    Ok(raw
        .into_iter()
        .map(|(location, expected, found)| {
            let candidates = available
                .iter()
                .filter(|c| c.source == found && c.target == expected)
                .cloned()
                .collect();
            MismatchSite {
                location,
                expected,
                found,
                candidates,
            }
        })
        .collect())
}

/// Chains `found -> ... -> expected` of at most `depth` coercions, shortest
/// first, never reusing a coercion.
fn chains(found: &str, expected: &str, available: &[Coercion], depth: usize) -> Vec<Vec<Coercion>> {
    let mut out = Vec::new();
    let mut queue: VecDeque<Vec<Coercion>> = VecDeque::from([Vec::new()]);
    while let Some(chain) = queue.pop_front() {
        let at = chain.last().map_or(found, |c| c.target.as_str());
        if !chain.is_empty() && at == expected {
            out.push(chain);
            continue;
        }
        if chain.len() == depth {
            continue;
        }
        for c in available.iter().filter(|c| c.source == at && !chain.contains(c)) {
            let mut next = chain.clone();
            next.push(c.clone());
            queue.push_back(next);
        }
    }
    out
}

fn reachable(found: &str, expected: &str, available: &[Coercion]) -> bool {
    let mut seen = BTreeSet::from([found.to_string()]);
    let mut queue = VecDeque::from([found.to_string()]);
    while let Some(s) = queue.pop_front() {
        for c in available.iter().filter(|c| c.source == s) {
            if c.target == expected {
                return true;
            }
            if seen.insert(c.target.clone()) {
                queue.push_back(c.target.clone());
            }
        }
    }
    false
}

/// Rigidity: a word whose rigid coercion is used contributes nothing else.
pub fn respects_rigidity(used: &[&Coercion]) -> bool {
    let mut by_owner: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut rigid_owners = BTreeSet::new();
    for c in used {
        by_owner.entry(&c.owner).or_default().insert(&c.name);
        if c.is_rigid() {
            rigid_owners.insert(c.owner.as_str());
        }
    }
    rigid_owners.iter().all(|o| by_owner[o].len() == 1)
}

fn insert_chain(term: &Term, site: &Path, chain: &[Coercion]) -> Term {
    let mut arg_path = site.clone();
    arg_path.push(Step::Arg);
    term.map_at(&arg_path, &mut |arg| {
        chain.iter().fold(arg.clone(), |acc, c| Term::app(c.constant(), acc))
    })
    .expect("mismatch sites point at applications")
}

/// Every way of repairing all mismatch sites of `term` with one coercion
/// (or, with `max_chain > 1`, one chain) per site such that the result
/// type-checks and rigidity is respected.
pub fn resolve_coercions(
    term: &Term,
    available: &[Coercion],
    opts: &ComposeOptions,
) -> Result<Vec<Repair>, ComposeError> {
    let Ok(sites) = find_mismatches(term, available) else {
        return Ok(Vec::new());
    };
    let available = dedup_coercions(available);
    let mut options: Vec<Vec<Vec<Coercion>>> = Vec::new();
    for site in &sites {
        let found = if opts.max_chain <= 1 {
            site.candidates.iter().map(|c| vec![c.clone()]).collect()
        } else {
            let cs = chains(&site.found, &site.expected, &available, opts.max_chain);
            if cs.is_empty() && reachable(&site.found, &site.expected, &available) {
                return Err(ComposeError::CoercionDepthExceeded {
                    expected: site.expected.clone(),
                    found: site.found.clone(),
                    depth: opts.max_chain,
                });
            }
            cs
        };
        if found.is_empty() {
            return Ok(Vec::new());
        }
        options.push(found);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; sites.len()];
    loop {
        let picked: Vec<&Vec<Coercion>> = choice.iter().enumerate().map(|(i, &k)| &options[i][k]).collect();
        let used: Vec<&Coercion> = picked.iter().flat_map(|c| c.iter()).collect();
        if respects_rigidity(&used) {
            // Deepest sites first so that earlier paths stay valid.
            let mut order: Vec<usize> = (0..sites.len()).collect();
            order.sort_by(|&a, &b| sites[b].location.cmp(&sites[a].location));
            let mut repaired = term.clone();
            for &i in &order {
                repaired = insert_chain(&repaired, &sites[i].location, picked[i]);
            }
            if type_of(&repaired, &HashMap::new()).is_ok() {
                out.push(Repair {
                    term: repaired,
                    choices: sites
                        .iter()
                        .zip(&picked)
                        .map(|(s, c)| CoercionUse {
                            location: s.location.clone(),
                            expected: s.expected.clone(),
                            found: s.found.clone(),
                            chain: (*c).clone(),
                        })
                        .collect(),
                });
            }
        }
        // Odometer over the per-site options.
        let mut i = sites.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn sense_choices(parse_words: &[String], assignment: &[Category], lexicon: &Lexicon) -> Result<Vec<Vec<usize>>, ComposeError> {
    let mut per_word = Vec::new();
    for (w, cat) in parse_words.iter().zip(assignment) {
        let ks: Vec<usize> = lexicon
            .entry(w)?
            .senses
            .iter()
            .enumerate()
            .filter(|(_, s)| &s.category == cat)
            .map(|(k, _)| k)
            .collect();
        if ks.is_empty() {
            return Err(ComposeError::MissingSense {
                word: w.clone(),
                category: cat.clone(),
            });
        }
        per_word.push(ks);
    }
    Ok(per_word.iter().fold(vec![Vec::new()], |acc, ks| {
        acc.into_iter()
            .flat_map(|prefix| {
                ks.iter().map(move |&k| {
                    let mut next = prefix.clone();
                    next.push(k);
                    next
                })
            })
            .collect()
    }))
}

/// The full pipeline for one sentence.
pub fn compute_readings(
    words: &[String],
    lexicon: &Lexicon,
    goal: &Category,
    opts: &ComposeOptions,
) -> Result<Analysis, ComposeError> {
    let found = enumerate_parses(words, lexicon, goal, &opts.prover)?;
    let mut available = if opts.coercions {
        phrase_coercions(lexicon, words)?
    } else {
        Vec::new()
    };
    if opts.coercions && opts.global_coercions {
        available.extend(lexicon.global_coercions.iter().cloned());
    }
    let mut readings: Vec<Reading> = Vec::new();
    let mut index: HashMap<Nameless, usize> = HashMap::new();
    let mut candidates = 0;
    for parse in &found.parses {
        let assignments = std::iter::once(&parse.assignment).chain(parse.alternatives.iter());
        for assignment in assignments {
            let mut p = parse.clone();
            p.assignment = assignment.clone();
            for senses in sense_choices(&p.words, assignment, lexicon)? {
                candidates += 1;
                let term = substitute_lexical(&p, lexicon, &senses)?;
                for repair in resolve_coercions(&term, &available, opts)? {
                    let normal = normalize(&repair.term, NormalForm::Beta);
                    if !normal.is_closed() || !infer(&normal).is_ok_and(|ty| ty.is_prop()) {
                        continue;
                    }
                    let provenance = Provenance {
                        assignment: assignment.clone(),
                        proof: parse.proof.encoding(),
                        senses: senses.clone(),
                        coercions: repair.choices,
                    };
                    let key = equivalence_key(&normal);
                    match index.get(&key) {
                        Some(&k) => {
                            if !readings[k].provenance.contains(&provenance) {
                                readings[k].provenance.push(provenance);
                            }
                        }
                        None => {
                            index.insert(key, readings.len());
                            readings.push(Reading {
                                term: normal.canonical_names(),
                                provenance: vec![provenance],
                            });
                        }
                    }
                }
            }
        }
    }
    readings.sort_by_cached_key(|r| r.term.untyped());
    let outcome = if found.parses.is_empty() {
        Outcome::NoParse
    } else if readings.is_empty() {
        Outcome::ParseButNoSorting
    } else {
        Outcome::Ok
    };
    Ok(Analysis {
        words: words.to_vec(),
        outcome,
        readings,
        parses: found.parses,
        candidates,
        search: found.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::parse_category;
    use crate::lambda::{parse_term, Signature};
    use crate::lexicon::{load_lexicon, Rigidity};

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn coercion(owner: &str, name: &str, source: &str, target: &str, rigid: bool) -> Coercion {
        Coercion {
            owner: owner.into(),
            name: name.into(),
            source: source.into(),
            target: target.into(),
            rigidity: if rigid { Rigidity::Rigid } else { Rigidity::Flexible },
        }
    }

    fn sig() -> Signature {
        Signature::new(["dog", "human", "artifact", "city", "region", "institution"])
    }

    fn term(s: &str) -> Term {
        parse_term(s, &sig(), None).unwrap()
    }

    #[test]
    fn sergeant_site_and_repair() {
        let t = term("((\\x:dog. (bark:(dog->t) x)) sergeant:human)");
        let avail = [coercion("barked", "c", "human", "dog", false)];
        let sites = find_mismatches(&t, &avail).unwrap();
        assert_eq!(sites.len(), 1);
        assert_eq!((sites[0].expected.as_str(), sites[0].found.as_str()), ("dog", "human"));
        assert_eq!(sites[0].candidates.len(), 1);
        let repairs = resolve_coercions(&t, &avail, &ComposeOptions::default()).unwrap();
        assert_eq!(repairs.len(), 1);
        let n = normalize(&repairs[0].term, NormalForm::Beta);
        assert_eq!(n.untyped(), "(bark (c sergeant))");
    }

    #[test]
    fn table_is_unrepairable_and_arrows_are_fatal() {
        let t = term("(bark:(dog->t) table:artifact)");
        let avail = [coercion("barked", "c", "human", "dog", false)];
        assert!(resolve_coercions(&t, &avail, &ComposeOptions::default()).unwrap().is_empty());
        assert!(find_mismatches(&term("(bark:(dog->t) dog:dog)"), &avail).unwrap().is_empty());
        let arrow = Term::app(term("bark:(dog->t)"), term("kid:(e->t)"));
        assert!(find_mismatches(&arrow, &avail).is_err());
    }

    #[test]
    fn rigid_coercion_blocks_siblings() {
        let t = term("(and:(t->t->t) (borders:(region->t) washington:city) (attack:(institution->t) washington:city))");
        let geo = coercion("washington", "geo", "city", "region", false);
        let flexible = [geo.clone(), coercion("washington", "gov", "city", "institution", false)];
        let rigid = [geo, coercion("washington", "gov", "city", "institution", true)];
        let opts = ComposeOptions::default();
        assert_eq!(resolve_coercions(&t, &flexible, &opts).unwrap().len(), 1);
        assert_eq!(resolve_coercions(&t, &rigid, &opts).unwrap().len(), 0);
        let one = term("(attack:(institution->t) washington:city)");
        assert_eq!(resolve_coercions(&one, &rigid, &opts).unwrap().len(), 1);
    }

    #[test]
    fn rigid_coercion_may_be_reused() {
        let t = term("(and:(t->t->t) (run:(institution->t) w:city) (attack:(institution->t) w:city))");
        let rigid = [coercion("w", "gov", "city", "institution", true)];
        assert_eq!(resolve_coercions(&t, &rigid, &ComposeOptions::default()).unwrap().len(), 1);
    }

    #[test]
    fn chains_are_opt_in() {
        let t = term("(bark:(dog->t) sergeant:human)");
        let avail = [
            coercion("x", "a", "human", "artifact", false),
            coercion("x", "b", "artifact", "dog", false),
        ];
        let single = ComposeOptions::default();
        assert!(resolve_coercions(&t, &avail, &single).unwrap().is_empty());
        let two = ComposeOptions {
            max_chain: 2,
            ..Default::default()
        };
        let r = resolve_coercions(&t, &avail, &two).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].term.untyped(), "(bark (b (a sergeant)))");
        let avail3 = [
            coercion("x", "a", "human", "artifact", false),
            coercion("x", "b", "artifact", "city", false),
            coercion("x", "c", "city", "dog", false),
        ];
        assert!(matches!(
            resolve_coercions(&t, &avail3, &two),
            Err(ComposeError::CoercionDepthExceeded { depth: 2, .. })
        ));
    }

    const MINI: &str = r#"{
      "sorts": ["dog", "human", "artifact"],
      "poly_constants": [{"name": "the", "schema": "('a->t)->'a"}],
      "words": [
        {"word": "the", "senses": [{"category": "np/n", "term": "the"}]},
        {"word": "dog", "senses": [{"category": "n", "term": "\\x:dog. (dog x)"}]},
        {"word": "sergeant", "senses": [{"category": "n", "term": "\\x:human. (sergeant x)"}]},
        {"word": "table", "senses": [{"category": "n", "term": "\\x:artifact. (table x)"}]},
        {"word": "barked", "senses": [{"category": "np\\S", "term": "\\x:dog. (bark x)"}],
         "coercions": [{"name": "as_dog", "source": "human", "target": "dog", "rigid": false}]}
      ]}"#;

    #[test]
    fn pipeline_outcomes() {
        let (lex, _) = load_lexicon(MINI).unwrap();
        let s = parse_category("S").unwrap();
        let opts = ComposeOptions::default();
        let run = |text: &str| compute_readings(&words(text), &lex, &s, &opts).unwrap();
        let dog = run("the dog barked");
        assert_eq!(dog.outcome, Outcome::Ok);
        assert_eq!(dog.readings.len(), 1);
        assert!(dog.readings[0].coercions().is_empty());
        let sergeant = run("the sergeant barked");
        assert_eq!(sergeant.readings.len(), 1);
        assert_eq!(sergeant.readings[0].coercions().len(), 1);
        assert_eq!(sergeant.readings[0].term.untyped(), "(bark (as_dog (the (λx. (sergeant x)))))");
        assert_eq!(run("the table barked").outcome, Outcome::ParseButNoSorting);
        assert_eq!(run("barked the dog").outcome, Outcome::NoParse);
        let no = ComposeOptions {
            coercions: false,
            ..Default::default()
        };
        let off = compute_readings(&words("the sergeant barked"), &lex, &s, &no).unwrap();
        assert_eq!(off.outcome, Outcome::ParseButNoSorting);
    }
}
