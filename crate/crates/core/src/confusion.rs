//! Closed-class word substitution and punctuation transitions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::Corruption;
use crate::rng::{chance, pick};
use crate::taxonomy::{ErrorType, Tag};
use crate::text::{tokenize, Sentence, TokenKind};

/// Default substitution probability per identified token.
pub const DEFAULT_SUBSTITUTION_P: f64 = 0.3;

/// Lookup order when a word belongs to several lists.
pub const LIST_PRIORITY: [ErrorType; 4] = [ErrorType::Prep, ErrorType::Conj, ErrorType::Pron, ErrorType::Det];

pub const PREPOSITIONS: [&str; 35] = [
    "la",
    "în",
    "către",
    "contrar",
    "fără",
    "după",
    "cu",
    "lângă",
    "asupra",
    "de",
    "de la",
    "despre",
    "dimprejurul",
    "din",
    "dinaintea",
    "înspre",
    "între",
    "înăuntrul",
    "împotriva",
    "împrejurul",
    "înaintea",
    "înapoia",
    "întru",
    "dedesubtul",
    "datorită",
    "printre",
    "prin",
    "primprejur",
    "peste",
    "pentru",
    "pe",
    "până",
    "via",
    "spre",
    "sub",
];

pub const CONJUNCTIONS: &[&str] = &[
    "și",
    "sau",
    "ori",
    "dar",
    "iar",
    "însă",
    "ci",
    "că",
    "să",
    "dacă",
    "deși",
    "fiindcă",
    "deoarece",
    "încât",
    "ca",
    "nici",
    "precum",
    "căci",
    "întrucât",
    "or",
    "ca să",
    "ca și",
    "fie",
];

pub const DETERMINERS: &[&str] = &[
    "un", "o", "niște", "unui", "unei", "unor", "cel", "cea", "cei", "cele", "celui", "celei", "celor", "acest",
    "această", "acești", "aceste", "acestui", "acestei", "acestor", "acel", "acea", "acei", "acele", "acelui",
    "acelei", "acelor", "fiecare", "orice", "alt", "altă", "alți", "alte", "al", "a", "ai", "ale",
];

pub const PRONOUNS: &[&str] = &[
    "eu",
    "tu",
    "el",
    "ea",
    "noi",
    "voi",
    "ei",
    "ele",
    "mine",
    "tine",
    "sine",
    "lui",
    "lor",
    "îmi",
    "îți",
    "își",
    "ne",
    "vă",
    "le",
    "îl",
    "îi",
    "mă",
    "te",
    "se",
    "care",
    "cine",
    "cui",
    "căruia",
    "căreia",
    "cărora",
    "însuși",
    "însăși",
    "înșiși",
    "însele",
    "însuți",
    "dânsul",
    "dânsa",
    "dumnealui",
    "dumneaei",
    "dumneavoastră",
];

/// Word lists for CONJ, DET, PREP and PRON.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionLists {
    lists: BTreeMap<ErrorType, Vec<String>>,
}

fn is_list_type(error: ErrorType) -> bool {
    LIST_PRIORITY.contains(&error)
}

fn single_word(entry: &str) -> bool {
    let s = tokenize(entry);
    s.len() == 1 && s.tokens()[0].kind == TokenKind::Word && s.tokens()[0].text == entry
}

impl ConfusionLists {
    /// Validates list keys and contents. Entries are lowercased and
    /// deduplicated in first-seen order.
    pub fn new(lists: BTreeMap<ErrorType, Vec<String>>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (error, words) in lists {
            if !is_list_type(error) {
                return Err(Error::Config(alloc::format!(
                    "{error} has no confusion list (expected CONJ, DET, PREP or PRON)"
                )));
            }
            let mut deduped: Vec<String> = Vec::with_capacity(words.len());
            for word in words {
                let word = word.trim().to_lowercase();
                if word.is_empty() {
                    return Err(Error::Config(alloc::format!("{error} list contains an empty entry")));
                }
                if !deduped.contains(&word) {
                    deduped.push(word);
                }
            }
            if deduped.is_empty() {
                return Err(Error::Config(alloc::format!("{error} list is empty")));
            }
            clean.insert(error, deduped);
        }
        Ok(ConfusionLists { lists: clean })
    }

    pub fn get(&self, error: ErrorType) -> Option<&[String]> {
        self.lists.get(&error).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ErrorType, &[String])> {
        self.lists.iter().map(|(e, l)| (*e, l.as_slice()))
    }

    /// Fills lists missing from `self` with the built-in defaults.
    pub fn with_defaults(mut self) -> Self {
        for (error, words) in ConfusionLists::default().lists {
            self.lists.entry(error).or_insert(words);
        }
        self
    }

    /// Keeps only the list for `error`.
    pub fn restricted_to(&self, error: ErrorType) -> Self {
        let lists = self.lists.iter().filter(|(e, _)| **e == error).map(|(e, l)| (*e, l.clone())).collect();
        ConfusionLists { lists }
    }

    /// The list a lowercase word belongs to, by [`LIST_PRIORITY`].
    pub fn classify(&self, lowercase: &str) -> Option<ErrorType> {
        LIST_PRIORITY.iter().copied().find(|e| self.lists.get(e).is_some_and(|l| l.iter().any(|w| w == lowercase)))
    }
}

impl Default for ConfusionLists {
    fn default() -> Self {
        let to_vec = |words: &[&str]| words.iter().map(|w| String::from(*w)).collect::<Vec<_>>();
        let lists = [
            (ErrorType::Prep, to_vec(&PREPOSITIONS)),
            (ErrorType::Conj, to_vec(CONJUNCTIONS)),
            (ErrorType::Det, to_vec(DETERMINERS)),
            (ErrorType::Pron, to_vec(PRONOUNS)),
        ];
        ConfusionLists::new(lists.into_iter().collect()).expect("built-in lists are valid")
    }
}

fn match_case(model: &str, word: &str) -> String {
    let mut chars = word.chars();
    match (model.chars().next(), chars.next()) {
        (Some(m), Some(first)) if m.is_uppercase() => first.to_uppercase().chain(chars).collect(),
        _ => String::from(word),
    }
}

/// Replaces each listed token, with probability `p`, by a different
/// single-word member of its list drawn uniformly, tagging it with the
/// list's error type. Multi-word entries such as "de la" are kept in the
/// lists but never matched or drawn, so token count is preserved.
pub fn corrupt_function_words<R: Rng + ?Sized>(
    sentence: &Sentence,
    lists: &ConfusionLists,
    p: f64,
    rng: &mut R,
) -> Corruption {
    let mut texts = Vec::with_capacity(sentence.len());
    let mut tags = Vec::with_capacity(sentence.len());
    for token in sentence.tokens() {
        let lower = token.text.to_lowercase();
        let class = if token.kind == TokenKind::Word { lists.classify(&lower) } else { None };
        let replacement = class.and_then(|error| {
            if !chance(rng, p) {
                return None;
            }
            let pool: Vec<&String> = lists.get(error)?.iter().filter(|w| **w != lower && single_word(w)).collect();
            if pool.is_empty() {
                return None;
            }
            Some((error, match_case(&token.text, pool[pick(rng, pool.len())])))
        });
        match replacement {
            Some((error, word)) => {
                texts.push(word);
                tags.push(Tag::Error(error));
            }
            None => {
                texts.push(token.text.clone());
                tags.push(Tag::O);
            }
        }
    }
    Corruption::from_tokens(texts, tags).expect("single-word substitution re-tokenizes")
}

/// Row-stochastic transition matrix over punctuation symbols.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PunctMatrix {
    pub symbols: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

const ROW_TOLERANCE: f64 = 1e-9;

impl PunctMatrix {
    pub fn new(symbols: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let matrix = PunctMatrix { symbols, rows };
        matrix.validate()?;
        Ok(matrix)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.symbols.len();
        if self.rows.len() != n {
            return Err(Error::Config(alloc::format!("matrix has {} rows for {n} symbols", self.rows.len())));
        }
        for (symbol, row) in self.symbols.iter().zip(&self.rows) {
            if row.len() != n {
                return Err(Error::Config(alloc::format!("row {symbol:?} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::Config(alloc::format!("row {symbol:?} has a negative entry")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::Config(alloc::format!("row {symbol:?} sums to {total}, expected 1")));
            }
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if self.symbols[..i].contains(s) {
                return Err(Error::Config(alloc::format!("symbol {s:?} listed twice")));
            }
        }
        Ok(())
    }

    pub fn identity(symbols: Vec<String>) -> Self {
        let n = symbols.len();
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        PunctMatrix { symbols, rows }
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn probability(&self, from: &str, to: &str) -> Option<f64> {
        Some(self.rows[self.index_of(from)?][self.index_of(to)?])
    }

    fn sample<R: Rng + ?Sized>(&self, row: usize, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last_positive = row;
        for (j, p) in self.rows[row].iter().enumerate() {
            if *p > 0.0 {
                last_positive = j;
            }
            acc += p;
            if u < acc {
                return j;
            }
        }
        last_positive
    }
}

impl Default for PunctMatrix {
    /// Six common marks. Every row keeps at least 0.75 on the diagonal and
    /// `;` becomes `,` with probability 0.25.
    fn default() -> Self {
        let symbols = [".", ",", ";", ":", "?", "!"].iter().map(|s| String::from(*s)).collect();
        let rows = alloc::vec![
            alloc::vec![0.85, 0.05, 0.04, 0.02, 0.02, 0.02],
            alloc::vec![0.06, 0.80, 0.08, 0.06, 0.00, 0.00],
            alloc::vec![0.00, 0.25, 0.75, 0.00, 0.00, 0.00],
            alloc::vec![0.06, 0.08, 0.06, 0.80, 0.00, 0.00],
            alloc::vec![0.08, 0.00, 0.00, 0.00, 0.85, 0.07],
            alloc::vec![0.10, 0.00, 0.00, 0.00, 0.05, 0.85],
        ];
        PunctMatrix::new(symbols, rows).expect("built-in matrix is valid")
    }
}

/// Redraws every punctuation token found in the matrix from its row.
pub fn corrupt_punctuation<R: Rng + ?Sized>(sentence: &Sentence, matrix: &PunctMatrix, rng: &mut R) -> Corruption {
    let mut texts = Vec::with_capacity(sentence.len());
    let mut tags = Vec::with_capacity(sentence.len());
    for token in sentence.tokens() {
        let row = if token.kind == TokenKind::Punct { matrix.index_of(&token.text) } else { None };
        match row {
            Some(i) => {
                let j = matrix.sample(i, rng);
                texts.push(matrix.symbols[j].clone());
                tags.push(if i == j { Tag::O } else { Tag::Error(ErrorType::Punct) });
            }
            None => {
                texts.push(token.text.clone());
                tags.push(Tag::O);
            }
        }
    }
    Corruption::from_tokens(texts, tags).expect("punctuation swap re-tokenizes")
}

/// Confusion engine settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionConfig {
    pub lists: ConfusionLists,
    pub matrix: PunctMatrix,
    pub p: f64,
}

impl Default for ConfusionConfig {
    fn default() -> Self {
        ConfusionConfig { lists: ConfusionLists::default(), matrix: PunctMatrix::default(), p: DEFAULT_SUBSTITUTION_P }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn preposition_list_is_complete() {
        let lists = ConfusionLists::default();
        let prep = lists.get(ErrorType::Prep).unwrap();
        assert_eq!(prep.len(), 35);
        for word in ["lângă", "primprejur", "de la", "sub", "în"] {
            assert!(prep.iter().any(|w| w == word), "{word}");
        }
        for (_, list) in lists.iter() {
            for (i, w) in list.iter().enumerate() {
                assert!(!list[..i].contains(w), "duplicate {w}");
            }
        }
    }

    #[test]
    fn priority_resolves_overlap() {
        let lists = ConfusionLists::default();
        // "a" is in DET and "ca" only in CONJ
        assert_eq!(lists.classify("ca"), Some(ErrorType::Conj));
        assert_eq!(lists.classify("de"), Some(ErrorType::Prep));
        assert_eq!(lists.classify("a"), Some(ErrorType::Det));
        let mut overlap = BTreeMap::new();
        overlap.insert(ErrorType::Det, vec!["x".into()]);
        overlap.insert(ErrorType::Prep, vec!["x".into(), "y".into()]);
        assert_eq!(ConfusionLists::new(overlap).unwrap().classify("x"), Some(ErrorType::Prep));
    }

    #[test]
    fn invalid_lists() {
        let mut bad = BTreeMap::new();
        bad.insert(ErrorType::Spell, vec!["x".into()]);
        assert!(ConfusionLists::new(bad).is_err());
        let mut empty = BTreeMap::new();
        empty.insert(ErrorType::Det, vec![]);
        assert!(ConfusionLists::new(empty).is_err());
    }

    #[test]
    fn zero_probability_is_identity() {
        let s = tokenize("Stau lângă casă, cu el și cu ea.");
        let out = corrupt_function_words(&s, &ConfusionLists::default(), 0.0, &mut seeded(1));
        assert_eq!(out.erroneous, s);
        assert!(!out.tags.has_errors());
    }

    #[test]
    fn substitutions_are_tagged_and_different() {
        let s = tokenize("Stau lângă casă.");
        let mut rng = seeded(9);
        let mut seen_primprejur = false;
        for _ in 0..2000 {
            let out = corrupt_function_words(&s, &ConfusionLists::default(), 1.0, &mut rng);
            assert_eq!(out.erroneous.len(), s.len());
            let replaced = &out.erroneous.texts()[1];
            assert_ne!(*replaced, "lângă");
            assert_ne!(*replaced, "de la");
            assert_eq!(out.tags.to_string(), "O PREP O O");
            seen_primprejur |= *replaced == "primprejur";
        }
        assert!(seen_primprejur);
    }

    #[test]
    fn capitalization_is_kept() {
        let s = tokenize("La Senat.");
        let out = corrupt_function_words(&s, &ConfusionLists::default(), 1.0, &mut seeded(2));
        assert!(out.erroneous.texts()[0].chars().next().unwrap().is_uppercase());
    }

    #[test]
    fn default_matrix() {
        let m = PunctMatrix::default();
        assert_eq!(m.probability(";", ","), Some(0.25));
        assert_eq!(m.probability(";", ";"), Some(0.75));
        for (i, row) in m.rows.iter().enumerate() {
            assert!(row[i] >= 0.7);
        }
    }

    #[test]
    fn bad_matrix_names_row() {
        let err = PunctMatrix::new(vec![".".into(), ",".into()], vec![vec![0.9, 0.0], vec![0.0, 1.0]]).unwrap_err();
        assert!(alloc::format!("{err}").contains("\".\""), "{err}");
    }

    #[test]
    fn identity_matrix_changes_nothing() {
        let s = tokenize("Da; nu, poate: da!");
        let m = PunctMatrix::identity(PunctMatrix::default().symbols);
        let out = corrupt_punctuation(&s, &m, &mut seeded(3));
        assert_eq!(out.erroneous, s);
        assert!(!out.tags.has_errors());
    }

    #[test]
    fn no_punctuation_no_change() {
        let s = tokenize("fără semne");
        let out = corrupt_punctuation(&s, &PunctMatrix::default(), &mut seeded(3));
        assert_eq!(out.erroneous, s);
    }

    #[test]
    fn punct_tags_mark_changes() {
        let s = tokenize("A; b, c. d? e! f: g");
        let mut rng = seeded(5);
        for _ in 0..500 {
            let out = corrupt_punctuation(&s, &PunctMatrix::default(), &mut rng);
            assert_eq!(out.erroneous.len(), s.len());
            for ((tag, new), old) in out.tags.tags().iter().zip(out.erroneous.texts()).zip(s.texts()) {
                assert_eq!(tag.is_error(), new != old);
            }
        }
    }
}
