//! Line-delimited JSON datasets, CES files, corpora and plain-text inputs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gecsynth_core::dataset::{CorpusSentence, ParallelExample};
use gecsynth_core::llm::{CesEntry, CorruptionExampleSet};
use gecsynth_core::text::tokenize;
use gecsynth_core::{ErrorType, Sentence, TagSequence};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

/// Non-empty lines of `path` with their 1-based line numbers.
fn lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.with_context(|| format!("{}:{}: read error", path.display(), i + 1))?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    lines(path)?
        .into_iter()
        .map(|(number, line)| serde_json::from_str(&line).map_err(|e| anyhow!("{}:{number}: {e}", path.display())))
        .collect()
}

pub fn write_jsonl<'a, T: Serialize + 'a, I: IntoIterator<Item = &'a T>>(path: &Path, items: I) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_examples(path: &Path, examples: &[ParallelExample]) -> Result<()> {
    write_jsonl(path, examples)
}

pub fn read_examples(path: &Path) -> Result<Vec<ParallelExample>> {
    read_jsonl(path)
}

/// One corpus line of a `.jsonl` corpus. `error` pins the planned error
/// for that sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub source_corpus: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorType>,
}

/// A corpus sentence plus an optional pinned error.
pub type CorpusLine = (CorpusSentence, Option<ErrorType>);

/// Reads a corpus: `.jsonl` files hold [`CorpusRecord`]s; anything else is
/// one sentence per line labelled `label` (default: the file stem).
pub fn read_corpus(path: &Path, label: Option<&str>) -> Result<Vec<CorpusLine>> {
    if path.extension().is_some_and(|e| e == "jsonl") {
        let records: Vec<CorpusRecord> = read_jsonl(path)?;
        return Ok(records
            .into_iter()
            .map(|r| (CorpusSentence::new(r.source_corpus, r.text.trim()), r.error))
            .collect());
    }
    let label = match label {
        Some(label) => label.to_string(),
        None => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "corpus".into()),
    };
    Ok(lines(path)?.into_iter().map(|(_, line)| (CorpusSentence::new(label.clone(), line.trim()), None)).collect())
}

/// One sentence per non-empty line.
pub fn read_sentences(path: &Path) -> Result<Vec<Sentence>> {
    Ok(lines(path)?.into_iter().map(|(_, line)| tokenize(line.trim())).collect())
}

/// Tag sequences, one per line: either space-separated tags or a dataset
/// record whose `tags` are used.
pub fn read_tag_sequences(path: &Path) -> Result<Vec<TagSequence>> {
    let mut out = Vec::new();
    for (number, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        let tags = if trimmed.starts_with('{') {
            serde_json::from_str::<ParallelExample>(trimmed).map(|e| e.tags).map_err(|e| anyhow!("{e}"))
        } else {
            trimmed.parse::<TagSequence>().map_err(|e| anyhow!("{e}"))
        };
        out.push(tags.with_context(|| format!("{}:{}", path.display(), number + 1))?);
    }
    // a trailing newline is not an extra empty sequence
    while out.last().is_some_and(TagSequence::is_empty) {
        out.pop();
    }
    Ok(out)
}

/// Reads a CES file, or the built-in seed book when `path` does not exist.
pub fn read_ces(path: &Path, error: ErrorType) -> Result<CorruptionExampleSet> {
    if !path.exists() {
        return Ok(CorruptionExampleSet::seed(error));
    }
    let entries: Vec<CesEntry> = read_jsonl(path)?;
    let ces = CorruptionExampleSet::new(error, entries).with_context(|| format!("loading {}", path.display()))?;
    if ces.initial_size == 0 {
        bail!("{} has no seed-book entries", path.display());
    }
    Ok(ces)
}

pub fn write_ces(path: &Path, ces: &CorruptionExampleSet) -> Result<()> {
    write_jsonl(path, &ces.entries)
}
