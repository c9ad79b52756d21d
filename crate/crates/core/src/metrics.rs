//! Grammar complexity measures and reading-count bounds.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::category::{count_atoms, order};
use crate::lambda::{classify_occurrences, OccurrenceClass};
use crate::lexicon::Lexicon;

/// Maximum category order over all senses of the lexicon.
pub fn grammar_order(lexicon: &Lexicon) -> usize {
    lexicon.senses().map(|(_, s)| order(&s.category)).max().unwrap_or(0)
}

fn big<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn big_opt<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.collect_str(n),
        None => s.serialize_none(),
    }
}

fn big_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrammarStats {
    pub max_order: usize,
    pub total_senses: usize,
    /// Number of atom occurrences in a category -> number of senses.
    pub atom_count_per_sense: BTreeMap<usize, usize>,
    /// Join of the occurrence classes of each word's senses.
    pub linearity_audit: BTreeMap<String, OccurrenceClass>,
    /// Most distinct categories for a single word.
    pub max_categories_per_word: usize,
    /// Most negative atom occurrences in a single category.
    pub max_negative_atoms: usize,
}

pub fn grammar_stats(lexicon: &Lexicon) -> GrammarStats {
    let mut atom_count_per_sense = BTreeMap::new();
    let mut linearity_audit = BTreeMap::new();
    let mut max_categories_per_word = 0;
    for entry in lexicon.entries.values() {
        let mut class: Option<OccurrenceClass> = None;
        for s in &entry.senses {
            *atom_count_per_sense.entry(count_atoms(&s.category)).or_insert(0) += 1;
            let c = classify_occurrences(&s.term);
            class = Some(class.map_or(c, |k| k.join(c)));
        }
        if let Some(c) = class {
            linearity_audit.insert(entry.word.clone(), c);
        }
        let distinct = lexicon.categories(&entry.word).map_or(0, |v| v.len());
        max_categories_per_word = max_categories_per_word.max(distinct);
    }
    GrammarStats {
        max_order: grammar_order(lexicon),
        total_senses: lexicon.senses().count(),
        atom_count_per_sense,
        linearity_audit,
        max_categories_per_word,
        max_negative_atoms: lexicon.senses().map(|(_, s)| s.category.negative_atoms()).max().unwrap_or(0),
    }
}

/// The n-th Catalan number.
pub fn catalan(n: usize) -> BigUint {
    // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step.
    let mut c = BigUint::from(1u32);
    for k in 0..n {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

/// Upper bound `c0^(c2 n) * C_(c1 c2 n)` on the number of proofs of an
/// n-quantifier sentence.
pub fn proof_bound(c0: usize, c1: usize, c2: usize, n: usize) -> BigUint {
    let exp = u32::try_from(c2 * n).expect("exponent fits in u32");
    BigUint::from(c0).pow(exp) * catalan(c1 * c2 * n)
}

/// Scope orders of `n` quantifiers in which no quantifier nested inside
/// another's noun phrase is separated from its host by a quantifier that
/// is not nested in that host. `nesting` lists `(host, nested)` pairs.
pub fn valid_scopings(n: usize, nesting: &[(usize, usize)]) -> usize {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        let mut pos = vec![0; n];
        for (i, &q) in perm.iter().enumerate() {
            pos[q] = i;
        }
        let ok = nesting.iter().all(|&(host, nested)| {
            pos[nested] < pos[host]
                || perm[pos[host] + 1..pos[nested]]
                    .iter()
                    .all(|&r| nesting.contains(&(host, r)))
        });
        if ok {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            return count;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("a larger element exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Words of the sentence with at least one sense flagged as a quantifier.
pub fn quantifier_count(lexicon: &Lexicon, words: &[String]) -> usize {
    words
        .iter()
        .filter(|w| lexicon.entry(w).is_ok_and(|e| e.senses.iter().any(|s| s.quantifier)))
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReadingReport {
    pub words: Vec<String>,
    pub observed: usize,
    pub quantifiers: usize,
    /// `quantifiers!`
    #[serde(serialize_with = "big")]
    pub permutations: BigUint,
    /// Well-formed scopings when nesting information is supplied.
    pub valid_scopings: Option<usize>,
    /// Valid scopings if known, otherwise `quantifiers!`.
    #[serde(serialize_with = "big")]
    pub expectation: BigUint,
    #[serde(serialize_with = "big")]
    pub shortfall: BigUint,
    /// Catalan numbers C_0 ..= C_quantifiers.
    #[serde(serialize_with = "big_vec")]
    pub catalan: Vec<BigUint>,
    #[serde(serialize_with = "big_opt")]
    pub proof_bound: Option<BigUint>,
}

/// Compare the observed number of readings with the combinatorial
/// expectation. `bound` is `(c0, c1, c2)` when the caller knows `c2`.
pub fn reading_report(
    words: &[String],
    observed: usize,
    quantifiers: usize,
    valid: Option<usize>,
    bound: Option<(usize, usize, usize)>,
) -> ReadingReport {
    let permutations = factorial(quantifiers);
    let expectation = valid.map_or_else(|| permutations.clone(), BigUint::from);
    let seen = BigUint::from(observed);
    let shortfall = if expectation > seen {
        &expectation - &seen
    } else {
        BigUint::from(0u32)
    };
    ReadingReport {
        words: words.to_vec(),
        observed,
        quantifiers,
        permutations,
        valid_scopings: valid,
        expectation,
        shortfall,
        catalan: (0..=quantifiers).map(catalan).collect(),
        proof_bound: bound.map(|(c0, c1, c2)| proof_bound(c0, c1, c2, quantifiers)),
    }
}
