//! LLM-assisted corruption: prompt templates, the client contract, response
//! parsing, validation of model output and corruption-example-set (CES)
//! enrichment.

mod ces;
mod client;
mod parse;
mod pipeline;
mod prompt;
mod validate;

pub use ces::{seed_book, CesEntry, CorruptionExampleSet, Origin};
pub use client::{request_key, ClientError, FixtureClient, LlmClient, LlmRequest, LlmResponse};
pub use parse::{parse_llm_response, render_response, ParsedCorruption, Verdict};
pub use pipeline::{
    enrich_ces, generate_llm_example, AutoAccept, EnrichReport, GenerationFailure, LlmGeneration, LlmOutcome,
    LlmSettings, Reviewer,
};
pub use prompt::{build_two_shot_prompt, build_zero_shot_prompt, PromptBook};
pub use validate::{validate_corruption, ValidationFailure};
