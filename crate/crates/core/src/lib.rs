//! Synthesis and scoring core for parallel grammatical-error corpora.
//!
//! Everything in this crate is a pure function of its inputs and a seed, and
//! builds without `std`. File formats, configuration loading, the HTTP model
//! client and the command line live in the `gecsynth` companion crate.
//!
//! The pipeline, bottom-up:
//!
//! - [`taxonomy`]: the 20 error codes, their target shares and generation
//!   methods, and the per-sentence error plan.
//! - [`text`]: tokenizer, detokenizer, tag sequences and alignment-derived
//!   tags.
//! - [`noise`]: word- and character-level noise (SPELL, ORTH, WO).
//! - [`confusion`]: closed-class substitution (CONJ, DET, PREP, PRON) and the
//!   punctuation transition matrix (PUNCT).
//! - [`llm`]: zero-shot and two-shot prompting, response parsing,
//!   validation and corruption-example-set enrichment.
//! - [`dataset`]: per-sentence dispatch, splitting and statistics.
//! - [`eval`]: GED confusion counts, MaxMatch-style GEC scoring and the
//!   GEC-D input format.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod align;
pub mod confusion;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod llm;
pub mod noise;
pub mod rng;
pub mod taxonomy;
pub mod text;

pub use error::{Error, Result};
pub use taxonomy::{ErrorType, Method, Tag};
pub use text::{Sentence, TagSequence, Token, TokenKind};
