//! Property tests across modules: prover against the brute-force
//! enumerator, and invariants of the composition pipeline.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use catsem::category::Category;
use catsem::compose::{compute_readings, respects_rigidity, Analysis, ComposeOptions, Outcome};
use catsem::driver::hol_options;
use catsem::hol::{to_formula, to_term};
use catsem::lambda::{equivalence_key, infer, SemType};
use catsem::lexicon::{load_lexicon, phrase_coercions, Lexicon, Rigidity};
use catsem::prover::{prove_sequent, ProverOptions, Sequent};

use common::{BruteForce, Expr};

fn demo() -> Lexicon {
    load_lexicon(&common::data("demo_lexicon.json")).unwrap().0
}

fn readings(lex: &Lexicon, words: &[String], opts: &ComposeOptions) -> Analysis {
    compute_readings(words, lex, &Category::atom("S"), opts).expect("analysis succeeds")
}

fn keys(a: &Analysis) -> BTreeSet<catsem::lambda::Nameless> {
    a.readings.iter().map(|r| equivalence_key(&r.term)).collect()
}

const VOCABULARY: [&str; 24] = [
    "every", "a", "most", "the", "this", "kid", "cartoon", "watched", "dog", "sergeant", "table", "barked", "book",
    "is", "heavy", "interesting", "and", "washington", "borders", "potomac", "attacked", "iraq", "saw", "samples",
];

fn agree(ants: &[Category], goal: &Category, allow_empty: bool) -> Result<(), TestCaseError> {
    let sorts = common::basic_sorts();
    let opts = ProverOptions {
        allow_empty_antecedent: allow_empty,
        ..ProverOptions::default()
    };
    let (found, _) = prove_sequent(&Sequent::new(ants.to_vec(), goal.clone()), &sorts, &opts).unwrap();
    let found: BTreeSet<Expr> = found.iter().map(|d| common::expr_of(&d.term)).collect();
    let expected: BTreeSet<Expr> = BruteForce::new(allow_empty).prove(ants, goal).iter().map(Expr::eta_short).collect();
    prop_assert_eq!(found, expected);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prover_matches_brute_force_on_provable_sequents(seed in any::<u64>(), splits in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let goal = common::random_category(&mut rng, &["np", "n", "S"], 1);
        let ants = common::random_provable(&mut rng, &["np", "n", "S"], &goal, splits);
        agree(&ants, &goal, false)?;
    }

    #[test]
    fn prover_matches_brute_force_without_the_restriction(seed in any::<u64>(), splits in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let goal = common::random_category(&mut rng, &["np", "S"], 2);
        let ants = common::random_provable(&mut rng, &["np", "S"], &goal, splits);
        agree(&ants, &goal, true)?;
    }

    #[test]
    fn random_sequents_agree(seed in any::<u64>(), len in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ants: Vec<Category> = (0..len).map(|_| common::random_category(&mut rng, &["np", "S"], 2)).collect();
        let goal = common::random_category(&mut rng, &["np", "S"], 1);
        agree(&ants, &goal, false)?;
    }

    #[test]
    fn unbalanced_sequents_have_no_proof(seed in any::<u64>(), len in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ants: Vec<Category> = (0..len).map(|_| common::random_category(&mut rng, &["np", "n", "S"], 2)).collect();
        let goal = common::random_category(&mut rng, &["np", "n", "S"], 2);
        let seq = Sequent::new(ants, goal);
        prop_assume!(!seq.is_balanced());
        let (found, _) = prove_sequent(&seq, &common::basic_sorts(), &ProverOptions::default()).unwrap();
        prop_assert!(found.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn readings_are_well_formed_and_coercions_local(idx in proptest::collection::vec(0..VOCABULARY.len(), 2..6)) {
        let lex = demo();
        let words: Vec<String> = idx.iter().map(|&i| VOCABULARY[i].to_string()).collect();
        let a = readings(&lex, &words, &ComposeOptions::default());
        let local: Vec<(String, String)> =
            phrase_coercions(&lex, &words).unwrap().into_iter().map(|c| (c.owner, c.name)).collect();
        let hol = hol_options(&lex);
        for r in &a.readings {
            prop_assert!(r.term.is_closed());
            prop_assert_eq!(infer(&r.term).unwrap(), SemType::t());
            for p in &r.provenance {
                let used: Vec<_> = p.coercions.iter().flat_map(|u| u.chain.iter()).collect();
                prop_assert!(respects_rigidity(&used));
                for c in used {
                    prop_assert!(local.contains(&(c.owner.clone(), c.name.clone())));
                }
            }
            let back = to_term(&to_formula(&r.term, &hol).unwrap(), &hol);
            prop_assert_eq!(equivalence_key(&back), equivalence_key(&r.term));
        }
        let plain = readings(&lex, &words, &ComposeOptions { coercions: false, ..ComposeOptions::default() });
        let uncoerced: BTreeSet<_> = a
            .readings
            .iter()
            .filter(|r| r.provenance.iter().any(|p| p.coercions.is_empty()))
            .map(|r| equivalence_key(&r.term))
            .collect();
        prop_assert_eq!(keys(&plain), uncoerced);
        prop_assert_eq!(a.parses.len(), plain.parses.len());
    }
}

#[test]
fn relaxing_rigidity_never_removes_readings() {
    let lex = demo();
    for case in common::golden_corpus() {
        let words: Vec<String> = case.sentence.split_whitespace().map(String::from).collect();
        let Ok(rigid) = compute_readings(&words, &lex, &Category::atom("S"), &ComposeOptions::default()) else {
            continue;
        };
        let mut flexible = lex.clone();
        for e in lex.entries.values() {
            for c in &e.coercions {
                flexible = flexible.with_rigidity(&e.word, &c.name, Rigidity::Flexible);
            }
        }
        let relaxed = readings(&flexible, &words, &ComposeOptions::default());
        assert!(keys(&rigid).is_subset(&keys(&relaxed)), "{}", case.sentence);
    }
}

#[test]
fn entity_only_lexicon_never_needs_coercions() {
    let lex = load_lexicon(&common::data("entity_lexicon.json")).unwrap().0;
    let words: Vec<String> = "every kid watched a cartoon".split_whitespace().map(String::from).collect();
    let on = readings(&lex, &words, &ComposeOptions::default());
    let off = readings(&lex, &words, &ComposeOptions { coercions: false, ..ComposeOptions::default() });
    assert_eq!(on.outcome, Outcome::Ok);
    assert_eq!(keys(&on), keys(&off));
    assert!(on.readings.iter().all(|r| r.coercions().is_empty()));
}
