//! Batch driver: lexicon + sentences in, rendered readings and exit status
//! out.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::category::{parse_category_with, sem_type, Category};
use crate::compose::{compute_readings, ComposeError, ComposeOptions, Reading};
use crate::hol::{render, structured, to_formula, HolOptions, Style};
use crate::lexicon::{load_lexicon_file, Lexicon, LexiconError};
use crate::metrics::{grammar_stats, quantifier_count, reading_report, GrammarStats, ReadingReport};
use crate::prover::{ProverError, ProverOptions, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_PARSE: i32 = 1;
pub const EXIT_NO_SORTING: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub lexicon: PathBuf,
    pub sentences: Vec<String>,
    /// File with one sentence per line; blank lines and `#` comments skipped.
    pub input: Option<PathBuf>,
    pub goal: String,
    pub format: OutputFormat,
    pub coercions: bool,
    pub allow_empty_antecedent: bool,
    pub max_readings: Option<usize>,
    pub budget: u64,
    pub stats: bool,
}

impl RunConfig {
    pub fn new(lexicon: impl Into<PathBuf>) -> Self {
        RunConfig {
            lexicon: lexicon.into(),
            sentences: Vec::new(),
            input: None,
            goal: "S".to_string(),
            format: OutputFormat::Text,
            coercions: true,
            allow_empty_antecedent: false,
            max_readings: None,
            budget: DEFAULT_BUDGET,
            stats: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoercionRecord {
    pub word: String,
    pub name: String,
    pub source: String,
    pub target: String,
    pub rigid: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReadingRecord {
    pub formula_unicode: String,
    pub formula_ascii: String,
    pub formula_tree: Value,
    pub assignment: Vec<String>,
    pub coercions: Vec<CoercionRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SentenceStats {
    pub parses: usize,
    pub readings: usize,
    pub candidates: usize,
    pub search_nodes: u64,
    pub memo_entries: usize,
    pub report: ReadingReport,
    pub grammar: GrammarStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct SentenceRecord {
    pub sentence: String,
    pub outcome: String,
    pub readings: Vec<ReadingRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<SentenceStats>,
}

impl SentenceRecord {
    fn exit_code(&self) -> i32 {
        match self.outcome.as_str() {
            "OK" => EXIT_OK,
            "PARSE_BUT_NO_SORTING" => EXIT_NO_SORTING,
            "INPUT_ERROR" => EXIT_INPUT_ERROR,
            _ => EXIT_NO_PARSE,
        }
    }
}

/// Combine per-sentence statuses: input errors, then failed parses, then
/// failed sorting.
pub fn combine_exit_codes(codes: impl IntoIterator<Item = i32>) -> i32 {
    let rank = |c: i32| match c {
        EXIT_INPUT_ERROR => 3,
        EXIT_NO_PARSE => 2,
        EXIT_NO_SORTING => 1,
        _ => 0,
    };
    codes.into_iter().max_by_key(|&c| rank(c)).unwrap_or(EXIT_OK)
}

fn input_error(message: String) -> RunOutput {
    RunOutput {
        exit_code: EXIT_INPUT_ERROR,
        stdout: String::new(),
        stderr: message + "\n",
    }
}

fn collect_sentences(config: &RunConfig) -> Result<Vec<(String, Option<usize>)>, String> {
    let mut out: Vec<(String, Option<usize>)> = config.sentences.iter().map(|s| (s.clone(), None)).collect();
    if let Some(path) = &config.input {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                out.push((line.to_string(), Some(i + 1)));
            }
        }
    }
    Ok(out)
}

pub fn render_reading(reading: &Reading, hol: &HolOptions) -> ReadingRecord {
    let phi = to_formula(&reading.term, hol).expect("readings are closed propositions");
    let prov = &reading.provenance[0];
    ReadingRecord {
        formula_unicode: render(&phi, Style::Unicode),
        formula_ascii: render(&phi, Style::Ascii),
        formula_tree: structured(&phi),
        assignment: prov.assignment.iter().map(Category::to_string).collect(),
        coercions: prov
            .coercions
            .iter()
            .flat_map(|u| u.chain.iter())
            .map(|c| CoercionRecord {
                word: c.owner.clone(),
                name: c.name.clone(),
                source: c.source.clone(),
                target: c.target.clone(),
                rigid: c.is_rigid(),
            })
            .collect(),
    }
}

pub fn hol_options(lexicon: &Lexicon) -> HolOptions {
    let mut coercions = BTreeSet::new();
    for e in lexicon.entries.values() {
        coercions.extend(e.coercions.iter().map(|c| c.name.clone()));
    }
    coercions.extend(lexicon.global_coercions.iter().map(|c| c.name.clone()));
    HolOptions {
        coercions,
        preserve_order: false,
    }
}

/// Analyze one sentence (whitespace-tokenized) into an output record.
pub fn analyze_sentence(
    sentence: &str,
    line: Option<usize>,
    lexicon: &Lexicon,
    goal: &Category,
    opts: &ComposeOptions,
    max_readings: Option<usize>,
    stats: bool,
) -> SentenceRecord {
    let words: Vec<String> = sentence.split_whitespace().map(String::from).collect();
    let at = line.map_or(String::new(), |l| format!("line {l}: "));
    let failed = |outcome: &str, error: String| SentenceRecord {
        sentence: sentence.to_string(),
        outcome: outcome.to_string(),
        readings: Vec::new(),
        error: Some(error),
        stats: None,
    };
    if words.is_empty() {
        return failed("INPUT_ERROR", format!("{at}empty sentence"));
    }
    let analysis = match compute_readings(&words, lexicon, goal, opts) {
        Ok(a) => a,
        Err(ComposeError::Prover(ProverError::UnknownWord(w))) => {
            return failed("INPUT_ERROR", format!("{at}unknown word `{w}`"))
        }
        Err(ComposeError::Prover(e @ ProverError::SearchLimitExceeded { .. })) => {
            return failed("SEARCH_LIMIT_EXCEEDED", format!("{at}{e}"))
        }
        Err(e) => return failed("INPUT_ERROR", format!("{at}{e}")),
    };
    let hol = hol_options(lexicon);
    let total = analysis.readings.len();
    let shown = max_readings.unwrap_or(total).min(total);
    let readings = analysis.readings[..shown].iter().map(|r| render_reading(r, &hol)).collect();
    let stats = stats.then(|| SentenceStats {
        parses: analysis.parses.len(),
        readings: total,
        candidates: analysis.candidates,
        search_nodes: analysis.search.nodes,
        memo_entries: analysis.search.memo_entries,
        report: reading_report(&words, total, quantifier_count(lexicon, &words), None, None),
        grammar: grammar_stats(lexicon),
    });
    SentenceRecord {
        sentence: sentence.to_string(),
        outcome: analysis.outcome.as_str().to_string(),
        readings,
        error: None,
        stats,
    }
}

fn text_output(records: &[SentenceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "{}", r.sentence);
        let _ = writeln!(out, "  outcome: {}", r.outcome);
        if let Some(e) = &r.error {
            let _ = writeln!(out, "  error: {e}");
        }
        for (i, reading) in r.readings.iter().enumerate() {
            let _ = writeln!(out, "  [{}] {}", i + 1, reading.formula_unicode);
            let _ = writeln!(out, "      assignment: {}", reading.assignment.join(" "));
            if !reading.coercions.is_empty() {
                let cs: Vec<String> = reading
                    .coercions
                    .iter()
                    .map(|c| format!("{}: {}->{} (from {})", c.name, c.source, c.target, c.word))
                    .collect();
                let _ = writeln!(out, "      coercions: {}", cs.join(", "));
            }
        }
        if let Some(s) = &r.stats {
            let _ = writeln!(
                out,
                "  stats: parses={} readings={} candidates={} nodes={} quantifiers={} expected={} shortfall={} grammar_order={}",
                s.parses,
                s.readings,
                s.candidates,
                s.search_nodes,
                s.report.quantifiers,
                s.report.expectation,
                s.report.shortfall,
                s.grammar.max_order
            );
        }
    }
    out
}

fn lexicon_error(path: &std::path::Path, e: &LexiconError) -> String {
    match e {
        LexiconError::Invalid(diags) => {
            let mut s = format!("{}: invalid lexicon", path.display());
            for d in diags {
                let _ = write!(s, "\n  {}: {d}", path.display());
            }
            s
        }
        other => other.to_string(),
    }
}

pub fn run(config: &RunConfig) -> RunOutput {
    if config.budget == 0 {
        return input_error("--budget must be positive".to_string());
    }
    if config.max_readings == Some(0) {
        return input_error("--max-readings must be positive".to_string());
    }
    let (lexicon, warnings) = match load_lexicon_file(&config.lexicon) {
        Ok(x) => x,
        Err(e) => return input_error(lexicon_error(&config.lexicon, &e)),
    };
    let goal = match parse_category_with(&config.goal, &lexicon.base.atoms()) {
        Ok(g) => g,
        Err(e) => return input_error(format!("--goal: {e}")),
    };
    match sem_type(&goal, &lexicon.base) {
        Ok(ty) if ty.is_prop() => {}
        Ok(ty) => return input_error(format!("--goal: `{goal}` denotes {ty}, not a proposition")),
        Err(e) => return input_error(format!("--goal: {e}")),
    }
    let sentences = match collect_sentences(config) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    if sentences.is_empty() {
        return input_error("no sentences given".to_string());
    }
    let opts = ComposeOptions {
        prover: ProverOptions {
            allow_empty_antecedent: config.allow_empty_antecedent,
            budget: config.budget,
        },
        coercions: config.coercions,
        ..Default::default()
    };
    let records: Vec<SentenceRecord> = sentences
        .par_iter()
        .map(|(s, line)| analyze_sentence(s, *line, &lexicon, &goal, &opts, config.max_readings, config.stats))
        .collect();
    let exit_code = combine_exit_codes(records.iter().map(SentenceRecord::exit_code));
    let stdout = match config.format {
        OutputFormat::Json => serde_json::to_string_pretty(&records).expect("records serialize") + "\n",
        OutputFormat::Text => text_output(&records),
    };
    let mut stderr = String::new();
    for w in &warnings {
        let _ = writeln!(stderr, "{}: {w}", config.lexicon.display());
    }
    for r in &records {
        if let Some(e) = &r.error {
            let _ = writeln!(stderr, "{}: {e}", r.sentence);
        }
    }
    RunOutput {
        exit_code,
        stdout,
        stderr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_precedence() {
        assert_eq!(combine_exit_codes([]), EXIT_OK);
        assert_eq!(combine_exit_codes([EXIT_OK, EXIT_NO_SORTING]), EXIT_NO_SORTING);
        assert_eq!(combine_exit_codes([EXIT_NO_SORTING, EXIT_NO_PARSE, EXIT_OK]), EXIT_NO_PARSE);
        assert_eq!(combine_exit_codes([EXIT_NO_PARSE, EXIT_INPUT_ERROR]), EXIT_INPUT_ERROR);
    }

    fn demo() -> RunConfig {
        RunConfig::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_lexicon.json"))
    }

    #[test]
    fn missing_lexicon_is_an_input_error() {
        let mut c = RunConfig::new("/nonexistent/lexicon.json");
        c.sentences.push("the dog barked".into());
        assert_eq!(run(&c).exit_code, EXIT_INPUT_ERROR);
    }

    #[test]
    fn sentence_outcomes_drive_exit_status() {
        let mut c = demo();
        c.sentences = vec!["every kid watched a cartoon".into()];
        let out = run(&c);
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("[1] ∃x. cartoon(x) ∧ ∀z. kid(z) ⇒ watched(z,x)"), "{}", out.stdout);
        c.sentences.push("the table barked".into());
        assert_eq!(run(&c).exit_code, EXIT_NO_SORTING);
        c.sentences.push("barked the dog".into());
        assert_eq!(run(&c).exit_code, EXIT_NO_PARSE);
        c.sentences.push("the unicorn barked".into());
        assert_eq!(run(&c).exit_code, EXIT_INPUT_ERROR);
    }
}
