//! Error taxonomy, target shares, generation methods and error planning.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng;

/// Tolerance used when checking that shares partition the error mass.
pub const SHARE_TOLERANCE: f64 = 1e-6;

/// One of the 20 error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorType {
    Adj,
    AdjForm,
    Adv,
    Conj,
    Det,
    Morph,
    Noun,
    NounInfl,
    NounNum,
    NounPoss,
    Orth,
    Prep,
    Pron,
    Punct,
    Spell,
    Verb,
    VerbForm,
    VerbSva,
    VerbTense,
    Wo,
}

/// How an error type is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    NoiseInjection,
    ConfusionList,
    ZeroShotLLM,
    TwoShotLLM,
}

impl Method {
    pub fn is_llm(self) -> bool {
        matches!(self, Method::ZeroShotLLM | Method::TwoShotLLM)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NoiseInjection" => Ok(Method::NoiseInjection),
            "ConfusionList" => Ok(Method::ConfusionList),
            "ZeroShotLLM" => Ok(Method::ZeroShotLLM),
            "TwoShotLLM" => Ok(Method::TwoShotLLM),
            other => Err(Error::Config(alloc::format!("unknown generation method {other:?}"))),
        }
    }
}

struct Row {
    error: ErrorType,
    code: &'static str,
    description: &'static str,
    method: Method,
    share: f64,
}

const TABLE: [Row; 20] = [
    Row {
        error: ErrorType::Adj,
        code: "ADJ",
        description: "Inappropriate choice of adjective for the sentence context",
        method: Method::TwoShotLLM,
        share: 0.0422,
    },
    Row {
        error: ErrorType::AdjForm,
        code: "ADJ:FORM",
        description: "Incorrect degree of an adjective",
        method: Method::ZeroShotLLM,
        share: 0.0294,
    },
    Row {
        error: ErrorType::Adv,
        code: "ADV",
        description: "Erroneous adverb usage",
        method: Method::TwoShotLLM,
        share: 0.0290,
    },
    Row {
        error: ErrorType::Conj,
        code: "CONJ",
        description: "Erroneous choice of conjunction",
        method: Method::ConfusionList,
        share: 0.0286,
    },
    Row {
        error: ErrorType::Det,
        code: "DET",
        description: "Erroneous choice of determiner",
        method: Method::ConfusionList,
        share: 0.0169,
    },
    Row {
        error: ErrorType::Morph,
        code: "MORPH",
        description: "Misuse of words stemming from the same root",
        method: Method::TwoShotLLM,
        share: 0.0501,
    },
    Row {
        error: ErrorType::Noun,
        code: "NOUN",
        description: "Inappropriate noun usage",
        method: Method::TwoShotLLM,
        share: 0.0255,
    },
    Row {
        error: ErrorType::NounInfl,
        code: "NOUN:INFL",
        description: "Incorrect inflection form of plural noun",
        method: Method::TwoShotLLM,
        share: 0.0134,
    },
    Row {
        error: ErrorType::NounNum,
        code: "NOUN:NUM",
        description: "Incorrect number of a noun",
        method: Method::TwoShotLLM,
        share: 0.0158,
    },
    Row {
        error: ErrorType::NounPoss,
        code: "NOUN:POSS",
        description: "Disagreement between noun and possessive article",
        method: Method::ZeroShotLLM,
        share: 0.0039,
    },
    Row {
        error: ErrorType::Orth,
        code: "ORTH",
        description: "Incorrect use of whitespace that changes sentence meaning",
        method: Method::NoiseInjection,
        share: 0.1052,
    },
    Row {
        error: ErrorType::Prep,
        code: "PREP",
        description: "Erroneous choice of preposition",
        method: Method::ConfusionList,
        share: 0.0313,
    },
    Row {
        error: ErrorType::Pron,
        code: "PRON",
        description: "Erroneous choice of pronoun",
        method: Method::ConfusionList,
        share: 0.0217,
    },
    Row {
        error: ErrorType::Punct,
        code: "PUNCT",
        description: "Inappropriate punctuation",
        method: Method::ConfusionList,
        share: 0.1076,
    },
    Row {
        error: ErrorType::Spell,
        code: "SPELL",
        description: "Errors related to word spelling",
        method: Method::NoiseInjection,
        share: 0.2555,
    },
    Row {
        error: ErrorType::Verb,
        code: "VERB",
        description: "Inappropriate choice of verb for the sentence context",
        method: Method::TwoShotLLM,
        share: 0.0072,
    },
    Row {
        error: ErrorType::VerbForm,
        code: "VERB:FORM",
        description: "Erroneous choice of form in a verb",
        method: Method::TwoShotLLM,
        share: 0.0057,
    },
    Row {
        error: ErrorType::VerbSva,
        code: "VERB:SVA",
        description: "Disagreement between subject and verb in a sentence",
        method: Method::TwoShotLLM,
        share: 0.0021,
    },
    Row {
        error: ErrorType::VerbTense,
        code: "VERB:TENSE",
        description: "Difference in tense between verb and rest of phrase",
        method: Method::TwoShotLLM,
        share: 0.0038,
    },
    Row {
        error: ErrorType::Wo,
        code: "WO",
        description: "Incorrect word order",
        method: Method::NoiseInjection,
        share: 0.2051,
    },
];

impl ErrorType {
    pub const ALL: [ErrorType; 20] = [
        ErrorType::Adj,
        ErrorType::AdjForm,
        ErrorType::Adv,
        ErrorType::Conj,
        ErrorType::Det,
        ErrorType::Morph,
        ErrorType::Noun,
        ErrorType::NounInfl,
        ErrorType::NounNum,
        ErrorType::NounPoss,
        ErrorType::Orth,
        ErrorType::Prep,
        ErrorType::Pron,
        ErrorType::Punct,
        ErrorType::Spell,
        ErrorType::Verb,
        ErrorType::VerbForm,
        ErrorType::VerbSva,
        ErrorType::VerbTense,
        ErrorType::Wo,
    ];

    fn row(self) -> &'static Row {
        &TABLE[self as usize]
    }

    pub fn code(self) -> &'static str {
        self.row().code
    }

    pub fn description(self) -> &'static str {
        self.row().description
    }

    /// Generation method from the reference taxonomy.
    pub fn default_method(self) -> Method {
        self.row().method
    }

    /// Target share from the reference taxonomy.
    pub fn default_share(self) -> f64 {
        self.row().share
    }

    pub fn from_code(code: &str) -> Result<Self> {
        TABLE
            .iter()
            .find(|row| row.code == code)
            .map(|row| row.error)
            .ok_or_else(|| Error::UnknownCode(code.to_string()))
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ErrorType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ErrorType::from_code(s)
    }
}

impl Serialize for ErrorType {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for ErrorType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let code = String::deserialize(deserializer)?;
        ErrorType::from_code(&code).map_err(serde::de::Error::custom)
    }
}

/// A token label: an error code or `O` for a correct token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Tag {
    #[default]
    O,
    Error(ErrorType),
}

impl Tag {
    pub fn is_error(self) -> bool {
        matches!(self, Tag::Error(_))
    }

    pub fn error(self) -> Option<ErrorType> {
        match self {
            Tag::O => None,
            Tag::Error(e) => Some(e),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::O => "O",
            Tag::Error(e) => e.code(),
        }
    }
}

impl From<ErrorType> for Tag {
    fn from(e: ErrorType) -> Self {
        Tag::Error(e)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "O" {
            Ok(Tag::O)
        } else {
            ErrorType::from_code(s).map(Tag::Error)
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A taxonomy row with its (possibly overridden) method and share.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTypeInfo {
    pub code: ErrorType,
    pub description: &'static str,
    pub method: Method,
    pub target_share: f64,
}

/// The reference taxonomy: all 20 rows in code order.
pub fn taxonomy() -> Vec<ErrorTypeInfo> {
    TABLE
        .iter()
        .map(|row| ErrorTypeInfo {
            code: row.error,
            description: row.description,
            method: row.method,
            target_share: row.share,
        })
        .collect()
}

/// Fraction of planned sentences per error type.
#[derive(Debug, Clone, PartialEq)]
pub struct Shares(BTreeMap<ErrorType, f64>);

impl Shares {
    /// Validates that all shares are non-negative and sum to one.
    pub fn new(map: BTreeMap<ErrorType, f64>) -> Result<Self> {
        let mut total = 0.0;
        for (error, share) in &map {
            if !(share.is_finite() && *share >= 0.0) {
                return Err(Error::Config(alloc::format!(
                    "share for {error} must be a non-negative number, got {share}"
                )));
            }
            total += share;
        }
        if (total - 1.0).abs() > SHARE_TOLERANCE {
            return Err(Error::Config(alloc::format!("shares sum to {total}, expected 1 +/- {SHARE_TOLERANCE}")));
        }
        Ok(Shares(map))
    }

    pub fn get(&self, error: ErrorType) -> f64 {
        self.0.get(&error).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ErrorType, f64)> + '_ {
        self.0.iter().map(|(e, s)| (*e, *s))
    }
}

impl Default for Shares {
    fn default() -> Self {
        Shares(TABLE.iter().map(|row| (row.error, row.share)).collect())
    }
}

/// One planned error type per input sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPlan {
    pub assignments: Vec<ErrorType>,
}

impl ErrorPlan {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn counts(&self) -> BTreeMap<ErrorType, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.assignments {
            *counts.entry(*e).or_insert(0) += 1;
        }
        counts
    }
}

/// Assigns one error type to each of `n_sentences` sentences.
///
/// Counts are fixed by largest-remainder quotas (ties go to the earlier code
/// in taxonomy order), then the assignment order is shuffled with `seed`.
pub fn plan_errors(n_sentences: usize, shares: &Shares, seed: u64) -> Result<ErrorPlan> {
    if n_sentences == 0 {
        return Err(Error::Config("cannot plan errors for zero sentences".into()));
    }
    let n = n_sentences as f64;
    let mut quotas: Vec<(ErrorType, usize, f64)> = shares
        .iter()
        .map(|(error, share)| {
            let exact = share * n;
            // non-negative, so truncation is floor
            let whole = exact as usize;
            (error, whole, exact - whole as f64)
        })
        .collect();
    let assigned: usize = quotas.iter().map(|q| q.1).sum();
    let mut leftover = n_sentences.saturating_sub(assigned);
    let mut by_remainder: Vec<usize> = (0..quotas.len()).collect();
    by_remainder
        .sort_by(|&a, &b| quotas[b].2.partial_cmp(&quotas[a].2).unwrap_or(core::cmp::Ordering::Equal).then(a.cmp(&b)));
    for idx in by_remainder.into_iter().cycle() {
        if leftover == 0 {
            break;
        }
        if shares.get(quotas[idx].0) > 0.0 {
            quotas[idx].1 += 1;
            leftover -= 1;
        }
    }

    let mut assignments = Vec::with_capacity(n_sentences);
    for (error, count, _) in &quotas {
        assignments.extend(core::iter::repeat_n(*error, *count));
    }
    assignments.truncate(n_sentences);
    rng::shuffle(&mut rng::seeded(seed), &mut assignments);
    Ok(ErrorPlan { assignments })
}
