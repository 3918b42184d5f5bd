//! GED and GEC scoring, plus the tag-augmented (GEC-D) input format.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::align::{align, AlignOp};
use crate::error::{Error, Result};
use crate::taxonomy::{ErrorType, Tag};
use crate::text::{Sentence, TagSequence};

pub const SEP: &str = "<SEP>";

/// F-beta from precision and recall; 0 when both are 0.
pub fn f_beta(p: f64, r: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denominator = b2 * p + r;
    if denominator == 0.0 {
        0.0
    } else {
        (1.0 + b2) * p * r / denominator
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl AddAssign for Counts {
    fn add_assign(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_half: f64,
}

impl Metrics {
    pub fn new(precision: f64, recall: f64) -> Self {
        Metrics { precision, recall, f_half: f_beta(precision, recall, 0.5) }
    }

    /// Empty denominators give 0, except that all-zero counts are a perfect
    /// score.
    pub fn from_counts(counts: Counts) -> Self {
        if counts == Counts::default() {
            return Metrics::new(1.0, 1.0);
        }
        Metrics::new(ratio_or(counts.tp, counts.tp + counts.fp, 0.0), ratio_or(counts.tp, counts.tp + counts.fn_, 0.0))
    }
}

fn ratio_or(part: usize, whole: usize, empty: f64) -> f64 {
    if whole == 0 {
        empty
    } else {
        part as f64 / whole as f64
    }
}

/// Decoding settings of the models whose output is scored. They are
/// reported alongside scores; decoding itself happens elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodingMetadata {
    pub top_p: f64,
    pub beam_size: usize,
}

impl Default for DecodingMetadata {
    fn default() -> Self {
        DecodingMetadata { top_p: 0.9, beam_size: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagScore {
    pub counts: Counts,
    pub metrics: Metrics,
}

impl TagScore {
    fn new(counts: Counts) -> Self {
        TagScore { counts, metrics: Metrics::from_counts(counts) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GedReport {
    pub per_tag: BTreeMap<ErrorType, TagScore>,
    pub aggregate: TagScore,
    pub decoding: DecodingMetadata,
}

/// Tallies one pair of tag sequences into `per_tag`.
fn tally(pred: &[Tag], gold: &[Tag], per_tag: &mut BTreeMap<ErrorType, Counts>) {
    for (p, g) in pred.iter().zip(gold) {
        match (p, g) {
            (Tag::Error(p), g) if *g == Tag::Error(*p) => per_tag.entry(*p).or_default().tp += 1,
            (Tag::Error(p), _) => per_tag.entry(*p).or_default().fp += 1,
            (Tag::O, Tag::Error(g)) => per_tag.entry(*g).or_default().fn_ += 1,
            (Tag::O, Tag::O) => {}
        }
    }
}

/// Token-level GED scores. A predicted error tag equal to the gold tag is a
/// true positive for that tag, any other predicted error tag a false
/// positive, and a missed gold tag a false negative; `O`/`O` positions are
/// not counted.
pub fn score_ged(pred: &[TagSequence], gold: &[TagSequence]) -> Result<GedReport> {
    if pred.len() != gold.len() {
        return Err(Error::Scoring(format!("{} predicted sequences for {} gold", pred.len(), gold.len())));
    }
    let mut per_tag = BTreeMap::new();
    for (index, (p, g)) in pred.iter().zip(gold).enumerate() {
        if p.len() != g.len() {
            return Err(Error::Scoring(format!("example {index}: predicted {} tags, gold has {}", p.len(), g.len())));
        }
        tally(p.tags(), g.tags(), &mut per_tag);
    }
    let mut aggregate = Counts::default();
    for counts in per_tag.values() {
        aggregate += *counts;
    }
    Ok(GedReport {
        per_tag: per_tag.into_iter().map(|(e, c)| (e, TagScore::new(c))).collect(),
        aggregate: TagScore::new(aggregate),
        decoding: DecodingMetadata::default(),
    })
}

/// Replace source tokens `src_span.0..src_span.1` with `replacement`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edit {
    pub src_span: (usize, usize),
    pub replacement: Vec<String>,
}

impl Edit {
    /// Unit operations the edit stands for.
    pub fn cost(&self) -> usize {
        (self.src_span.1 - self.src_span.0).max(self.replacement.len())
    }
}

/// Edits turning `source` into `target`: a minimum-cost token alignment
/// with each maximal run of non-equal operations merged into one edit.
pub fn extract_edits<S: AsRef<str>>(source: &[S], target: &[S]) -> Vec<Edit> {
    let src: Vec<&str> = source.iter().map(AsRef::as_ref).collect();
    let tgt: Vec<&str> = target.iter().map(AsRef::as_ref).collect();
    let mut edits = Vec::new();
    let mut open: Option<Edit> = None;
    let mut src_pos = 0;
    for op in align(&src, &tgt) {
        match op {
            AlignOp::Equal { .. } => {
                edits.extend(open.take());
                src_pos += 1;
            }
            AlignOp::Substitute { tgt: t, .. } | AlignOp::Insert { tgt: t } => {
                let consumes = matches!(op, AlignOp::Substitute { .. });
                let edit = open.get_or_insert_with(|| Edit { src_span: (src_pos, src_pos), replacement: Vec::new() });
                edit.replacement.push(tgt[t].into());
                if consumes {
                    src_pos += 1;
                    edit.src_span.1 = src_pos;
                }
            }
            AlignOp::Delete { .. } => {
                let edit = open.get_or_insert_with(|| Edit { src_span: (src_pos, src_pos), replacement: Vec::new() });
                src_pos += 1;
                edit.src_span.1 = src_pos;
            }
        }
    }
    edits.extend(open);
    edits
}

/// [`extract_edits`] over sentence tokens.
pub fn sentence_edits(source: &Sentence, target: &Sentence) -> Vec<Edit> {
    extract_edits(&source.texts(), &target.texts())
}

/// Applies sorted, non-overlapping edits to `source`.
pub fn apply_edits<S: AsRef<str>>(source: &[S], edits: &[Edit]) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(source.len());
    let mut pos = 0;
    for edit in edits {
        let (start, end) = edit.src_span;
        if start < pos || end < start || end > source.len() {
            return Err(Error::Scoring(format!("edit span {start}..{end} is out of order or out of range")));
        }
        out.extend(source[pos..start].iter().map(|s| s.as_ref().to_string()));
        out.extend(edit.replacement.iter().cloned());
        pos = end;
    }
    out.extend(source[pos..].iter().map(|s| s.as_ref().to_string()));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GecReport {
    pub matched: usize,
    pub predicted: usize,
    pub gold: usize,
    pub metrics: Metrics,
    pub decoding: DecodingMetadata,
}

/// Corpus-level edit scores. Gold edits come from (source, reference) and
/// predicted edits from (source, hypothesis), extracted the same way; an
/// edit matches only when span and replacement are identical. No predicted
/// edits gives precision 1 and no gold edits gives recall 1.
pub fn score_gec(sources: &[Sentence], hypotheses: &[Sentence], references: &[Sentence]) -> Result<GecReport> {
    if sources.len() != hypotheses.len() || sources.len() != references.len() {
        return Err(Error::Scoring(format!(
            "{} sources, {} hypotheses and {} references",
            sources.len(),
            hypotheses.len(),
            references.len()
        )));
    }
    let (mut matched, mut predicted, mut gold) = (0, 0, 0);
    for ((source, hypothesis), reference) in sources.iter().zip(hypotheses).zip(references) {
        let pred = sentence_edits(source, hypothesis);
        let reference_edits = sentence_edits(source, reference);
        matched += pred.iter().filter(|e| reference_edits.contains(e)).count();
        predicted += pred.len();
        gold += reference_edits.len();
    }
    let metrics = Metrics::new(ratio_or(matched, predicted, 1.0), ratio_or(matched, gold, 1.0));
    Ok(GecReport { matched, predicted, gold, metrics, decoding: DecodingMetadata::default() })
}

/// Tokens, `<SEP>`, then tags, space-separated.
pub fn serialize_gecd_input(erroneous: &Sentence, tags: &TagSequence) -> Result<String> {
    if erroneous.len() != tags.len() {
        return Err(Error::Validation(format!("{} tags for {} tokens", tags.len(), erroneous.len())));
    }
    let mut parts: Vec<&str> = erroneous.texts();
    parts.push(SEP);
    parts.extend(tags.tags().iter().map(|t| t.as_str()));
    Ok(parts.join(" "))
}

/// Inverse of [`serialize_gecd_input`]: (tokens, tags).
pub fn parse_gecd_input(line: &str) -> Result<(Vec<String>, TagSequence)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let at = parts
        .iter()
        .position(|p| *p == SEP)
        .ok_or_else(|| Error::Parse { reason: "missing <SEP>".into(), raw: line.into() })?;
    let tokens: Vec<String> = parts[..at].iter().map(|s| s.to_string()).collect();
    let tags = parts[at + 1..]
        .iter()
        .map(|t| t.parse::<Tag>())
        .collect::<Result<TagSequence>>()
        .map_err(|e| Error::Parse { reason: e.to_string(), raw: line.into() })?;
    if tags.len() != tokens.len() {
        return Err(Error::Parse {
            reason: format!("{} tags for {} tokens", tags.len(), tokens.len()),
            raw: line.into(),
        });
    }
    Ok((tokens, tags))
}
