use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::Corruption;
use crate::rng::pick;
use crate::taxonomy::{ErrorType, Method};
use crate::text::{diff_tags, indices_to_tags, tokenize, Sentence};

use super::ces::{CesEntry, CorruptionExampleSet, Origin};
use super::client::{LlmClient, LlmRequest};
use super::parse::{parse_llm_response, ParsedCorruption, Verdict};
use super::prompt::PromptBook;
use super::validate::{validate_corruption, ValidationFailure};

#[derive(Debug, Clone, PartialEq)]
pub struct LlmSettings {
    pub model_id: String,
    pub temperature: f64,
    /// Total attempts per sentence, the first call included.
    pub max_attempts: u32,
}

impl Default for LlmSettings {
    fn default() -> Self {
        LlmSettings { model_id: "gpt-4o".into(), temperature: 0.7, max_attempts: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlmGeneration {
    pub corruption: Corruption,
    pub parsed: ParsedCorruption,
    /// True when the index list passed validation and produced the tags.
    pub indices_trusted: bool,
    pub failures: Vec<ValidationFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationFailure {
    pub cause: String,
    pub attempts: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LlmOutcome {
    Generated(LlmGeneration),
    NoPartOfSpeech,
    Failed(GenerationFailure),
}

/// Two distinct entries, in draw order.
fn draw_pair<'a, R: Rng + ?Sized>(ces: &'a CorruptionExampleSet, rng: &mut R) -> (&'a CesEntry, &'a CesEntry) {
    let n = ces.entries.len();
    let i = pick(rng, n);
    let mut j = pick(rng, n - 1);
    if j >= i {
        j += 1;
    }
    (&ces.entries[i], &ces.entries[j])
}

fn build_prompt<R: Rng + ?Sized>(
    prompts: &PromptBook,
    ces: Option<&CorruptionExampleSet>,
    error: ErrorType,
    sentence: &Sentence,
    rng: &mut R,
) -> Result<String> {
    match prompts.method(error) {
        Method::ZeroShotLLM => prompts.zero_shot(error, sentence.raw()),
        Method::TwoShotLLM => {
            let ces = ces.ok_or_else(|| Error::InsufficientExamples(format!("no CES loaded for {error}")))?;
            if ces.entries.len() < 2 {
                return Err(Error::InsufficientExamples(format!(
                    "CES for {error} has {} entries, two are needed",
                    ces.entries.len()
                )));
            }
            let (first, second) = draw_pair(ces, rng);
            prompts.two_shot(error, sentence.raw(), first, second)
        }
        other => Err(Error::Usage(format!("{error} is generated with {other:?}, not an LLM prompt"))),
    }
}

/// Sends the prompt, retrying transport and parse failures.
fn request_parsed<C: LlmClient + ?Sized>(
    client: &C,
    settings: &LlmSettings,
    prompt: String,
) -> core::result::Result<ParsedCorruption, GenerationFailure> {
    let request = LlmRequest { model_id: settings.model_id.clone(), prompt, temperature: settings.temperature };
    let attempts = settings.max_attempts.max(1);
    let mut cause = String::new();
    for attempt in 1..=attempts {
        if attempt > 1 {
            client.before_retry(attempt - 1);
        }
        match client.complete(&request) {
            Ok(response) => match parse_llm_response(&response.text) {
                Ok(parsed) => return Ok(parsed),
                Err(err) => cause = format!("{err}"),
            },
            Err(err) => cause = format!("{err}"),
        }
    }
    Err(GenerationFailure { cause, attempts })
}

/// Corrupts one sentence through the model. Two-shot errors draw two
/// distinct exemplars from `ces`. A reply whose index list fails validation
/// is tagged from the token alignment instead; a reply that leaves the
/// sentence unchanged is a failure.
///
/// Errors are reserved for misuse: a non-LLM error type or a CES with fewer
/// than two entries.
pub fn generate_llm_example<C: LlmClient + ?Sized, R: Rng + ?Sized>(
    client: &C,
    settings: &LlmSettings,
    prompts: &PromptBook,
    ces: Option<&CorruptionExampleSet>,
    error: ErrorType,
    sentence: &Sentence,
    rng: &mut R,
) -> Result<LlmOutcome> {
    let prompt = build_prompt(prompts, ces, error, sentence, rng)?;
    let parsed = match request_parsed(client, settings, prompt) {
        Ok(parsed) => parsed,
        Err(failure) => return Ok(LlmOutcome::Failed(failure)),
    };
    if parsed.verdict == Verdict::NoPartOfSpeech {
        return Ok(LlmOutcome::NoPartOfSpeech);
    }

    let erroneous = tokenize(&parsed.erroneous_sentence);
    let (tags, failures) = match validate_corruption(sentence, &parsed, error) {
        Ok(()) => (indices_to_tags(erroneous.len(), &parsed.indices, error)?, Vec::new()),
        Err(failures) => {
            if failures.contains(&ValidationFailure::NoModification) {
                return Ok(LlmOutcome::Failed(GenerationFailure {
                    cause: format!("{}", ValidationFailure::NoModification),
                    attempts: 1,
                }));
            }
            (diff_tags(sentence, &erroneous, error), failures)
        }
    };
    Ok(LlmOutcome::Generated(LlmGeneration {
        indices_trusted: failures.is_empty(),
        corruption: Corruption { erroneous, tags },
        parsed,
        failures,
    }))
}

/// Accept/reject decision for a candidate CES entry.
pub trait Reviewer {
    fn review(&mut self, candidate: &CesEntry) -> bool;
}

/// Accepts every candidate.
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoAccept;

impl Reviewer for AutoAccept {
    fn review(&mut self, _candidate: &CesEntry) -> bool {
        true
    }
}

impl<F: FnMut(&CesEntry) -> bool> Reviewer for F {
    fn review(&mut self, candidate: &CesEntry) -> bool {
        self(candidate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichReport {
    pub ces: CorruptionExampleSet,
    /// The corpus ran out before the set reached twice its seed size.
    pub exhausted: bool,
    pub accepted: usize,
    pub rejected: usize,
    /// Replies that failed, were unvalidated or repeated an existing entry.
    pub failed: usize,
    pub skipped: usize,
}

/// Grows `ces` with validated, reviewer-approved model corruptions of corpus
/// sentences, in corpus order, until it holds twice its seed entries.
pub fn enrich_ces<'s, C, I, V, R>(
    client: &C,
    settings: &LlmSettings,
    prompts: &PromptBook,
    mut ces: CorruptionExampleSet,
    corpus: I,
    reviewer: &mut V,
    rng: &mut R,
) -> Result<EnrichReport>
where
    C: LlmClient + ?Sized,
    I: IntoIterator<Item = &'s Sentence>,
    V: Reviewer + ?Sized,
    R: Rng + ?Sized,
{
    let error = ces.error_type;
    if prompts.method(error) != Method::TwoShotLLM {
        return Err(Error::Usage(format!("{error} is not generated with two-shot prompts")));
    }
    let (mut accepted, mut rejected, mut failed, mut skipped) = (0, 0, 0, 0);
    for sentence in corpus {
        if ces.is_full() {
            break;
        }
        let generation = match generate_llm_example(client, settings, prompts, Some(&ces), error, sentence, rng)? {
            LlmOutcome::Generated(generation) if generation.indices_trusted => generation,
            LlmOutcome::NoPartOfSpeech => {
                skipped += 1;
                continue;
            }
            _ => {
                failed += 1;
                continue;
            }
        };
        let candidate = CesEntry {
            erroneous: generation.parsed.erroneous_sentence,
            correct: sentence.raw().into(),
            tags: generation.corruption.tags,
            origin: Origin::LlmGenerated,
        };
        if candidate.validate().is_err() || ces.entries.iter().any(|e| e.erroneous == candidate.erroneous) {
            failed += 1;
            continue;
        }
        if reviewer.review(&candidate) {
            ces.entries.push(candidate);
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    let exhausted = !ces.is_full();
    Ok(EnrichReport { ces, exhausted, accepted, rejected, failed, skipped })
}
