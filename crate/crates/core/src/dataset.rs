//! Per-sentence dispatch to the corruption engines, the parallel-example
//! record, train/test splitting and corpus statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::align::possibly_edited;
use crate::confusion::{corrupt_function_words, corrupt_punctuation, ConfusionConfig};
use crate::error::{Error, Result};
use crate::llm::{generate_llm_example, CorruptionExampleSet, LlmClient, LlmOutcome, LlmSettings, PromptBook};
use crate::noise::{corrupt_sentence_noise, Corruption, NoiseConfig};
use crate::rng::{child_seed, seeded, shuffle, stable_hash_hex};
use crate::taxonomy::{ErrorPlan, ErrorType, Method, Tag};
use crate::text::{tokenize, Sentence, TagSequence};

/// One (correct, erroneous, tags) triple with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ExampleRecord", try_from = "ExampleRecord")]
pub struct ParallelExample {
    pub id: String,
    pub source_corpus: String,
    pub correct: Sentence,
    pub erroneous: Sentence,
    pub tags: TagSequence,
    /// Error types realized in the tags, or the planned type when the only
    /// edit was a deletion.
    pub injected: Vec<ErrorType>,
    pub seed: u64,
}

/// Wire form. `tag_string` is derived from `tags` and checked on read.
#[derive(Serialize, Deserialize)]
struct ExampleRecord {
    id: String,
    source_corpus: String,
    correct: String,
    erroneous: String,
    tags: TagSequence,
    tag_string: String,
    injected: Vec<ErrorType>,
    seed: u64,
}

impl From<ParallelExample> for ExampleRecord {
    fn from(example: ParallelExample) -> Self {
        ExampleRecord {
            tag_string: example.tags.to_string(),
            id: example.id,
            source_corpus: example.source_corpus,
            correct: example.correct.raw().into(),
            erroneous: example.erroneous.raw().into(),
            tags: example.tags,
            injected: example.injected,
            seed: example.seed,
        }
    }
}

impl TryFrom<ExampleRecord> for ParallelExample {
    type Error = Error;

    fn try_from(record: ExampleRecord) -> Result<Self> {
        if record.tag_string != record.tags.to_string() {
            return Err(Error::Validation(format!(
                "example {}: tag_string {:?} disagrees with tags",
                record.id, record.tag_string
            )));
        }
        let example = ParallelExample {
            id: record.id,
            source_corpus: record.source_corpus,
            correct: tokenize(&record.correct),
            erroneous: tokenize(&record.erroneous),
            tags: record.tags,
            injected: record.injected,
            seed: record.seed,
        };
        example.check_length()?;
        Ok(example)
    }
}

impl ParallelExample {
    /// Stable identifier of the `index`-th sentence of `source_corpus`.
    pub fn make_id(source_corpus: &str, index: usize) -> String {
        stable_hash_hex(&[source_corpus.as_bytes(), index.to_string().as_bytes()], 8)
    }

    fn check_length(&self) -> Result<()> {
        if self.tags.len() != self.erroneous.len() {
            return Err(Error::Validation(format!(
                "example {}: {} tags for {} erroneous tokens",
                self.id,
                self.tags.len(),
                self.erroneous.len()
            )));
        }
        Ok(())
    }

    /// Checks tag length and that tags sit on edits. Tags are compared run
    /// by run: every maximal run of one error tag must contain at least one
    /// token that some minimum-cost alignment with the correct sentence
    /// substitutes or inserts. A run may still cover unchanged neighbours,
    /// as in "cel mai Oficial" where only the first two tokens are new.
    pub fn check_invariants(&self) -> Result<()> {
        self.check_length()?;
        if let Some((start, end)) = unmarked_run(&self.correct, &self.erroneous, &self.tags) {
            return Err(Error::Validation(format!(
                "example {}: {} at tokens {start}..{end} marks no edit",
                self.id,
                self.tags.tags()[start]
            )));
        }
        let realized: BTreeSet<ErrorType> = self.tags.error_types().into_iter().collect();
        if !realized.iter().all(|e| self.injected.contains(e)) {
            return Err(Error::Validation(format!("example {}: injected list misses a tagged type", self.id)));
        }
        Ok(())
    }
}

/// First run of one error tag with no token edited under any minimum-cost
/// alignment. `tags` must be as long as `erroneous`.
fn unmarked_run(correct: &Sentence, erroneous: &Sentence, tags: &TagSequence) -> Option<(usize, usize)> {
    let edited = possibly_edited(&correct.texts(), &erroneous.texts());
    let tags = tags.tags();
    let mut start = 0;
    while start < tags.len() {
        let end = start + tags[start..].iter().take_while(|t| **t == tags[start]).count();
        if tags[start].is_error() && !edited[start..end].iter().any(|e| *e) {
            return Some((start, end));
        }
        start = end;
    }
    None
}

/// Noise draws per sentence before giving up on tags that alignment cannot
/// explain.
pub const NOISE_ATTEMPTS: usize = 10;

/// A corpus sentence with its source label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSentence {
    pub source_corpus: String,
    pub sentence: Sentence,
}

impl CorpusSentence {
    pub fn new(source_corpus: impl Into<String>, raw: &str) -> Self {
        CorpusSentence { source_corpus: source_corpus.into(), sentence: tokenize(raw) }
    }
}

/// Model access for the LLM-generated error types.
pub struct LlmEngine<'a, C: LlmClient + ?Sized> {
    pub client: &'a C,
    pub settings: LlmSettings,
    pub prompts: PromptBook,
    pub ces: BTreeMap<ErrorType, CorruptionExampleSet>,
}

/// Everything needed to corrupt a sentence with any planned error.
pub struct Engines<'a, C: LlmClient + ?Sized> {
    pub methods: BTreeMap<ErrorType, Method>,
    pub noise: NoiseConfig,
    pub vocabulary: Vec<String>,
    pub confusion: ConfusionConfig,
    pub llm: Option<LlmEngine<'a, C>>,
}

/// An example plus the reason it fell back to noise, if it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleOutcome {
    pub example: ParallelExample,
    pub fallback: Option<String>,
}

impl<C: LlmClient + ?Sized> Engines<'_, C> {
    pub fn method(&self, error: ErrorType) -> Method {
        self.methods.get(&error).copied().unwrap_or_else(|| error.default_method())
    }

    /// Noise injection, redrawn while a tag run sits on tokens that every
    /// minimum-cost alignment leaves unchanged. Adjacent swaps sharing a
    /// repeated word can produce such runs.
    fn noise<R: rand::Rng + ?Sized>(&self, sentence: &Sentence, rng: &mut R) -> Corruption {
        let mut corruption = corrupt_sentence_noise(sentence, &self.noise, &self.vocabulary, rng);
        for _ in 1..NOISE_ATTEMPTS {
            if unmarked_run(sentence, &corruption.erroneous, &corruption.tags).is_none() {
                break;
            }
            corruption = corrupt_sentence_noise(sentence, &self.noise, &self.vocabulary, rng);
        }
        corruption
    }

    /// Corrupts the `index`-th input sentence with its planned error. The
    /// sentence's random stream is seeded from `seed` and the example id,
    /// so results do not depend on processing order.
    ///
    /// LLM sentences that come back as NO or fail, and confusion sentences
    /// where no token was swapped, fall back to noise injection. Errors are
    /// configuration problems such as an LLM error type without a configured
    /// model or CES.
    pub fn generate_example(
        &self,
        index: usize,
        input: &CorpusSentence,
        planned: ErrorType,
        seed: u64,
    ) -> Result<ExampleOutcome> {
        let id = ParallelExample::make_id(&input.source_corpus, index);
        let example_seed = child_seed(seed, &id);
        let mut rng = seeded(example_seed);
        let sentence = &input.sentence;
        let mut fallback = None;
        let corruption = match self.method(planned) {
            Method::NoiseInjection => self.noise(sentence, &mut rng),
            Method::ConfusionList => {
                let corruption = match planned {
                    ErrorType::Punct => corrupt_punctuation(sentence, &self.confusion.matrix, &mut rng),
                    ErrorType::Conj | ErrorType::Det | ErrorType::Prep | ErrorType::Pron => {
                        corrupt_function_words(sentence, &self.confusion.lists, self.confusion.p, &mut rng)
                    }
                    other => return Err(Error::Config(format!("{other} has no confusion list"))),
                };
                if corruption.tags.has_errors() {
                    corruption
                } else {
                    fallback = Some("confusion draw changed nothing".into());
                    self.noise(sentence, &mut rng)
                }
            }
            Method::ZeroShotLLM | Method::TwoShotLLM => {
                let llm = self
                    .llm
                    .as_ref()
                    .ok_or_else(|| Error::Config(format!("{planned} needs an LLM but none is configured")))?;
                let outcome = generate_llm_example(
                    llm.client,
                    &llm.settings,
                    &llm.prompts,
                    llm.ces.get(&planned),
                    planned,
                    sentence,
                    &mut rng,
                )?;
                match outcome {
                    LlmOutcome::Generated(generation) => generation.corruption,
                    LlmOutcome::NoPartOfSpeech => {
                        fallback = Some("model found no matching part of speech".into());
                        self.noise(sentence, &mut rng)
                    }
                    LlmOutcome::Failed(failure) => {
                        fallback = Some(format!("{} after {} attempt(s)", failure.cause, failure.attempts));
                        self.noise(sentence, &mut rng)
                    }
                }
            }
        };

        let mut injected = corruption.tags.error_types();
        if injected.is_empty() && corruption.erroneous.texts() != sentence.texts() {
            injected.push(planned);
        }
        let example = ParallelExample {
            id,
            source_corpus: input.source_corpus.clone(),
            correct: sentence.clone(),
            erroneous: corruption.erroneous,
            tags: corruption.tags,
            injected,
            seed: example_seed,
        };
        example.check_invariants()?;
        Ok(ExampleOutcome { example, fallback })
    }

    /// Runs [`Engines::generate_example`] over `corpus` in order. Sentences
    /// whose generation errors are reported in `skipped` with the reason.
    pub fn generate_dataset(&self, corpus: &[CorpusSentence], plan: &ErrorPlan, seed: u64) -> Result<GenerationRun> {
        check_plan(corpus.len(), plan)?;
        let mut run = GenerationRun::default();
        for (index, input) in corpus.iter().enumerate() {
            run.record(index, self.generate_example(index, input, plan.assignments[index], seed));
        }
        Ok(run)
    }
}

/// Fails when `plan` is shorter than the corpus.
pub fn check_plan(corpus_len: usize, plan: &ErrorPlan) -> Result<()> {
    if plan.len() < corpus_len {
        return Err(Error::Usage(format!("plan covers {} sentences, corpus has {corpus_len}", plan.len())));
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerationRun {
    pub examples: Vec<ParallelExample>,
    /// (sentence index, reason) for sentences corrupted by noise instead.
    pub fallbacks: Vec<(usize, String)>,
    /// (sentence index, reason) for sentences left out.
    pub skipped: Vec<(usize, String)>,
}

impl GenerationRun {
    /// Adds the result for sentence `index`; call in input order.
    pub fn record(&mut self, index: usize, result: Result<ExampleOutcome>) {
        match result {
            Ok(outcome) => {
                if let Some(reason) = outcome.fallback {
                    self.fallbacks.push((index, reason));
                }
                self.examples.push(outcome.example);
            }
            Err(err) => self.skipped.push((index, err.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    /// Only examples from this corpus may enter the test set.
    pub test_corpus_filter: Option<String>,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { train_fraction: 0.9, test_corpus_filter: None }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Split(format!(
                "train fraction {} is not strictly between 0 and 1",
                self.train_fraction
            )));
        }
        Ok(())
    }

    /// (train, test) sizes for `n` examples.
    pub fn sizes(&self, n: usize) -> (usize, usize) {
        let train = ((self.train_fraction * n as f64) + 0.5) as usize;
        let train = train.min(n);
        (train, n - train)
    }
}

/// Splits `examples` into (train, test). Test members are drawn by a seeded
/// shuffle of the eligible examples; both sides keep input order.
pub fn split(
    examples: Vec<ParallelExample>,
    spec: &SplitSpec,
    seed: u64,
) -> Result<(Vec<ParallelExample>, Vec<ParallelExample>)> {
    spec.validate()?;
    let (_, n_test) = spec.sizes(examples.len());
    let mut eligible: Vec<usize> = examples
        .iter()
        .enumerate()
        .filter(|(_, e)| spec.test_corpus_filter.as_ref().is_none_or(|label| &e.source_corpus == label))
        .map(|(i, _)| i)
        .collect();
    if eligible.len() < n_test {
        let label = spec.test_corpus_filter.as_deref().unwrap_or("any corpus");
        return Err(Error::Split(format!(
            "test set needs {n_test} examples from {label} but only {} exist (short by {})",
            eligible.len(),
            n_test - eligible.len()
        )));
    }
    shuffle(&mut seeded(seed), &mut eligible);
    let mut in_test = alloc::vec![false; examples.len()];
    for &i in &eligible[..n_test] {
        in_test[i] = true;
    }
    let (mut train, mut test) = (Vec::new(), Vec::with_capacity(n_test));
    for (example, is_test) in examples.into_iter().zip(in_test) {
        if is_test {
            test.push(example);
        } else {
            train.push(example);
        }
    }
    Ok((train, test))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub sentence_count: usize,
    pub token_count: usize,
    pub erroneous_token_count: usize,
    pub error_rate: f64,
    pub type_counts: BTreeMap<ErrorType, usize>,
    pub type_shares: BTreeMap<ErrorType, f64>,
}

impl CorpusStats {
    fn add(&mut self, example: &ParallelExample) {
        self.sentence_count += 1;
        self.token_count += example.tags.len();
        for tag in example.tags.tags() {
            if let Tag::Error(error) = tag {
                self.erroneous_token_count += 1;
                *self.type_counts.entry(*error).or_default() += 1;
            }
        }
    }

    fn finish(&mut self) {
        self.error_rate = ratio(self.erroneous_token_count, self.token_count);
        let total = self.erroneous_token_count;
        self.type_shares = self.type_counts.iter().map(|(e, c)| (*e, ratio(*c, total))).collect();
    }
}

fn ratio(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

/// Token and error counts per source corpus and in total. Tokens are those
/// of the erroneous sentences; erroneous tokens carry a non-`O` tag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub per_corpus: BTreeMap<String, CorpusStats>,
    pub total: CorpusStats,
}

pub fn stats<'a, I: IntoIterator<Item = &'a ParallelExample>>(examples: I) -> DatasetStats {
    let mut result = DatasetStats::default();
    for example in examples {
        result.per_corpus.entry(example.source_corpus.clone()).or_default().add(example);
        result.total.add(example);
    }
    result.per_corpus.values_mut().for_each(CorpusStats::finish);
    result.total.finish();
    result
}
