//! End-to-end corruption runs: plan, engines, parallel generation and the
//! ordered writer.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gecsynth_core::dataset::{check_plan, CorpusSentence, Engines, GenerationRun, LlmEngine};
use gecsynth_core::llm::{CorruptionExampleSet, FixtureClient, LlmClient};
use gecsynth_core::noise::build_vocabulary;
use gecsynth_core::rng::child_seed;
use gecsynth_core::taxonomy::{plan_errors, ErrorPlan, Shares};
use gecsynth_core::{ErrorType, Method};
use rayon::prelude::*;

use crate::config::Config;
use crate::files::{read_ces, read_corpus, write_examples, CorpusLine};
use crate::fixture::{load_fixture, RecordingClient};
use crate::http::HttpClient;

/// Seeded plan over the corpus; pinned sentences keep their error.
pub fn plan_corpus(corpus: &[CorpusLine], shares: &Shares, seed: u64) -> Result<ErrorPlan> {
    let mut plan = if corpus.is_empty() {
        ErrorPlan { assignments: Vec::new() }
    } else {
        plan_errors(corpus.len(), shares, child_seed(seed, "plan"))?
    };
    for (slot, (_, pinned)) in plan.assignments.iter_mut().zip(corpus) {
        if let Some(error) = pinned {
            *slot = *error;
        }
    }
    Ok(plan)
}

/// Generates all examples on a pool of `threads` workers. Each sentence has
/// its own seed, and results are collected in input order, so output does
/// not depend on the thread count.
pub fn generate_parallel<C: LlmClient + Sync + ?Sized>(
    engines: &Engines<'_, C>,
    corpus: &[CorpusSentence],
    plan: &ErrorPlan,
    seed: u64,
    threads: usize,
) -> Result<GenerationRun> {
    check_plan(corpus.len(), plan)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
    let results: Vec<_> = pool.install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(index, input)| engines.generate_example(index, input, plan.assignments[index], seed))
            .collect()
    });
    let mut run = GenerationRun::default();
    for (index, result) in results.into_iter().enumerate() {
        run.record(index, result);
    }
    Ok(run)
}

/// The model backend for a run.
pub enum Backend {
    Offline,
    Fixture(FixtureClient),
    Http(HttpClient),
    Recording(RecordingClient<HttpClient>, PathBuf),
}

impl Backend {
    /// A fixture wins over an endpoint; `record` wraps the endpoint client.
    pub fn select(
        config: &Config,
        fixture: Option<&Path>,
        endpoint: Option<&str>,
        record: Option<&Path>,
    ) -> Result<Self> {
        let fixture = fixture.map(Path::to_path_buf).or_else(|| config.llm.fixture.clone());
        let endpoint = endpoint.map(str::to_string).or_else(|| config.llm.endpoint.clone());
        if let Some(path) = fixture {
            return Ok(Backend::Fixture(load_fixture(&path)?));
        }
        if let Some(endpoint) = endpoint {
            let client = HttpClient::new(endpoint, &config.llm.token_env);
            return Ok(match record {
                Some(path) => Backend::Recording(RecordingClient::new(client), path.to_path_buf()),
                None => Backend::Http(client),
            });
        }
        Ok(Backend::Offline)
    }

    pub fn client(&self) -> Option<&(dyn LlmClient + Sync)> {
        match self {
            Backend::Offline => None,
            Backend::Fixture(client) => Some(client),
            Backend::Http(client) => Some(client),
            Backend::Recording(client, _) => Some(client),
        }
    }

    /// Writes recorded exchanges, if recording.
    pub fn finish(&self) -> Result<()> {
        if let Backend::Recording(client, path) = self {
            client.write(path)?;
            log::info!("recorded {} exchanges to {}", client.records().len(), path.display());
        }
        Ok(())
    }
}

/// CES for every two-shot error that `plan` uses.
pub fn load_ces_sets(config: &Config, plan: &ErrorPlan) -> Result<BTreeMap<ErrorType, CorruptionExampleSet>> {
    let mut sets = BTreeMap::new();
    for error in plan.assignments.iter().copied() {
        if sets.contains_key(&error) || config.methods[&error] != Method::TwoShotLLM {
            continue;
        }
        let ces = match config.ces.get(&error) {
            Some(path) => read_ces(path, error)?,
            None => CorruptionExampleSet::seed(error),
        };
        sets.insert(error, ces);
    }
    Ok(sets)
}

pub struct CorruptJob<'a> {
    pub input: &'a Path,
    pub output: &'a Path,
    pub label: Option<&'a str>,
    pub seed: u64,
    pub config: &'a Config,
    pub client: Option<&'a (dyn LlmClient + Sync)>,
}

/// Reads the corpus, corrupts it and writes the dataset. `client` is only
/// required when the plan contains LLM-generated errors.
pub fn run_corrupt(job: &CorruptJob<'_>) -> Result<GenerationRun> {
    let config = job.config;
    let corpus = read_corpus(job.input, job.label)?;
    let plan = plan_corpus(&corpus, &config.shares, job.seed)?;
    let sentences: Vec<CorpusSentence> = corpus.into_iter().map(|(s, _)| s).collect();

    let uses_llm =
        plan.assignments.iter().any(|e| matches!(config.methods[e], Method::ZeroShotLLM | Method::TwoShotLLM));
    let client = job.client;
    if uses_llm && client.is_none() {
        bail!("the error plan includes LLM-generated errors; configure an LLM fixture or endpoint");
    }
    let llm = match client {
        Some(client) if uses_llm => Some(LlmEngine {
            client,
            settings: config.llm.settings.clone(),
            prompts: config.prompts.clone(),
            ces: load_ces_sets(config, &plan)?,
        }),
        _ => None,
    };
    let engines = Engines {
        methods: config.methods.clone(),
        noise: config.noise.clone(),
        vocabulary: build_vocabulary(sentences.iter().map(|s| &s.sentence)),
        confusion: config.confusion.clone(),
        llm,
    };
    let threads = if uses_llm { config.llm.max_in_flight } else { rayon::current_num_threads() };
    let run = generate_parallel(&engines, &sentences, &plan, job.seed, threads)?;

    for (index, reason) in &run.fallbacks {
        log::debug!("sentence {index}: noise fallback ({reason})");
    }
    if !run.fallbacks.is_empty() {
        log::info!("{} sentence(s) fell back to noise injection", run.fallbacks.len());
    }
    for (index, reason) in &run.skipped {
        log::warn!("sentence {index} skipped: {reason}");
    }
    write_examples(job.output, &run.examples).with_context(|| format!("writing {}", job.output.display()))?;
    Ok(run)
}
