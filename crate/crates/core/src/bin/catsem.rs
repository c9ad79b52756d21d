use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use catsem::driver::{run, OutputFormat, RunConfig};
use catsem::prover::DEFAULT_BUDGET;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Compute the logical readings of sentences under a categorial lexicon.
#[derive(Debug, Parser)]
#[command(name = "catsem", version)]
struct Args {
    /// Lexicon file (JSON).
    #[arg(long)]
    lexicon: PathBuf,
    /// Sentence to analyze; may be repeated.
    #[arg(long = "sentence")]
    sentences: Vec<String>,
    /// File with one sentence per line.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Goal category.
    #[arg(long, default_value = "S")]
    goal: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Never insert coercions.
    #[arg(long)]
    no_coercions: bool,
    /// Drop the non-empty antecedent restriction.
    #[arg(long)]
    allow_empty_antecedent: bool,
    /// Print at most this many readings per sentence.
    #[arg(long)]
    max_readings: Option<usize>,
    /// Search node budget per sentence.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Include parse counts, reading report and grammar statistics.
    #[arg(long)]
    stats: bool,
}

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let config = RunConfig {
        lexicon: args.lexicon,
        sentences: args.sentences,
        input: args.input,
        goal: args.goal,
        format: match args.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        coercions: !args.no_coercions,
        allow_empty_antecedent: args.allow_empty_antecedent,
        max_readings: args.max_readings,
        budget: args.budget,
        stats: args.stats,
    };
    let out = run(&config);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.exit_code);
}
