//! `gecsynth` subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gecsynth_core::dataset::{split, stats, SplitSpec};
use gecsynth_core::eval::{score_gec, score_ged};
use gecsynth_core::llm::{enrich_ces, AutoAccept, Reviewer};
use gecsynth_core::rng::{child_seed, seeded};
use gecsynth_core::{ErrorType, Sentence};

use crate::config::Config;
use crate::files::{
    read_ces, read_corpus, read_examples, read_sentences, read_tag_sequences, write_ces, write_examples,
};
use crate::report::{gec_table, ged_table, stats_table};
use crate::review::{review_ces, InteractiveReviewer};
use crate::runner::{run_corrupt, Backend, CorruptJob};

#[derive(Debug, Parser)]
#[command(name = "gecsynth", version, about = "Synthetic grammatical-error corpus generation and scoring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a configuration value, e.g. `--set llm.temperature=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<Config> {
        Config::load(self.config.as_deref(), &self.overrides)
    }
}

#[derive(Debug, Args)]
pub struct LlmArgs {
    /// Replay model replies from a recorded fixture file.
    #[arg(long)]
    pub llm_fixture: Option<PathBuf>,
    /// Send prompts to this endpoint.
    #[arg(long)]
    pub llm_endpoint: Option<String>,
    /// Record live exchanges to this fixture file.
    #[arg(long, requires = "llm_endpoint")]
    pub record_fixture: Option<PathBuf>,
}

impl LlmArgs {
    fn backend(&self, config: &Config) -> Result<Backend> {
        Backend::select(
            config,
            self.llm_fixture.as_deref(),
            self.llm_endpoint.as_deref(),
            self.record_fixture.as_deref(),
        )
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corrupt a clean corpus into a parallel dataset.
    Corrupt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Corpus label for plain-text input (default: file stem).
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        llm: LlmArgs,
    },
    /// Grow a corruption example set with reviewed model corruptions.
    EnrichCes {
        #[arg(long)]
        error: ErrorType,
        #[arg(long)]
        corpus: PathBuf,
        /// CES file; created from the built-in seed book if missing.
        #[arg(long)]
        ces: PathBuf,
        #[arg(long)]
        auto_accept: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        llm: LlmArgs,
    },
    /// Accept or reject the model-generated entries of a CES file.
    Review {
        #[arg(long)]
        ces: PathBuf,
        #[arg(long)]
        error: ErrorType,
    },
    /// Split a dataset into train and test files.
    Split {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        train_out: PathBuf,
        #[arg(long)]
        test_out: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        fraction: f64,
        /// Draw the test set only from this source corpus.
        #[arg(long)]
        test_corpus: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Token and error statistics of a dataset.
    Stats {
        #[arg(long)]
        input: PathBuf,
        /// Also write the statistics as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Token-level error detection scores.
    ScoreGed {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Edit-level correction scores.
    ScoreGec {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check every example of a dataset file.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn main() -> Result<()> {
    run(Cli::parse(), &mut std::io::stdout().lock())
}

/// Runs one command, printing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Corrupt { input, output, label, seed, config, llm } => {
            let config = config.load()?;
            let backend = llm.backend(&config)?;
            let job = CorruptJob {
                input: &input,
                output: &output,
                label: label.as_deref(),
                seed,
                config: &config,
                client: backend.client(),
            };
            let result = run_corrupt(&job)?;
            backend.finish()?;
            writeln!(
                out,
                "wrote {} examples to {} ({} noise fallbacks, {} skipped)",
                result.examples.len(),
                output.display(),
                result.fallbacks.len(),
                result.skipped.len()
            )?;
        }
        Command::EnrichCes { error, corpus, ces, auto_accept, seed, config, llm } => {
            let config = config.load()?;
            let backend = llm.backend(&config)?;
            let Some(client) = backend.client() else {
                bail!("enrichment needs --llm-fixture or --llm-endpoint");
            };
            let sentences: Vec<Sentence> = read_corpus(&corpus, None)?.into_iter().map(|(s, _)| s.sentence).collect();
            let set = read_ces(&ces, error)?;
            let mut interactive = InteractiveReviewer::new(std::io::stdin().lock(), std::io::stderr());
            let reviewer: &mut dyn Reviewer = if auto_accept { &mut AutoAccept } else { &mut interactive };
            let mut rng = seeded(child_seed(seed, "enrich"));
            let report =
                enrich_ces(client, &config.llm.settings, &config.prompts, set, &sentences, reviewer, &mut rng)?;
            write_ces(&ces, &report.ces)?;
            backend.finish()?;
            if report.exhausted {
                log::warn!(
                    "corpus exhausted before doubling: {} of {} entries",
                    report.ces.len(),
                    report.ces.capacity()
                );
            }
            writeln!(
                out,
                "{}: {} entries ({} accepted, {} rejected, {} unusable, {} skipped)",
                error,
                report.ces.len(),
                report.accepted,
                report.rejected,
                report.failed,
                report.skipped
            )?;
        }
        Command::Review { ces, error } => {
            let set = read_ces(&ces, error)?;
            let mut reviewer = InteractiveReviewer::new(std::io::stdin().lock(), std::io::stderr());
            let (kept, removed) = review_ces(set, &mut reviewer);
            write_ces(&ces, &kept)?;
            writeln!(out, "{error}: kept {} entries, removed {removed}", kept.len())?;
        }
        Command::Split { input, train_out, test_out, fraction, test_corpus, seed } => {
            let examples = read_examples(&input)?;
            let spec = SplitSpec { train_fraction: fraction, test_corpus_filter: test_corpus };
            let (train, test) = split(examples, &spec, seed)?;
            write_examples(&train_out, &train)?;
            write_examples(&test_out, &test)?;
            writeln!(out, "train {} / test {}", train.len(), test.len())?;
        }
        Command::Stats { input, json } => {
            let examples = read_examples(&input)?;
            let stats = stats(&examples);
            write!(out, "{}", stats_table(&stats))?;
            if let Some(path) = json {
                write_json(&path, &stats)?;
            }
        }
        Command::ScoreGed { pred, gold, json } => {
            let report = score_ged(&read_tag_sequences(&pred)?, &read_tag_sequences(&gold)?)?;
            write!(out, "{}", ged_table(&report))?;
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
        }
        Command::ScoreGec { src, hyp, reference, json } => {
            let report = score_gec(&read_sentences(&src)?, &read_sentences(&hyp)?, &read_sentences(&reference)?)?;
            write!(out, "{}", gec_table(&report))?;
            if let Some(path) = json {
                write_json(&path, &report)?;
            }
        }
        Command::Validate { input } => {
            let examples = read_examples(&input)?;
            let mut bad = 0;
            for (i, example) in examples.iter().enumerate() {
                if let Err(err) = example.check_invariants() {
                    bad += 1;
                    writeln!(out, "example {} ({}): {err}", i + 1, example.id)?;
                }
            }
            if bad > 0 {
                bail!("{bad} of {} examples violate invariants", examples.len());
            }
            writeln!(out, "{} examples ok", examples.len())?;
        }
    }
    Ok(())
}
