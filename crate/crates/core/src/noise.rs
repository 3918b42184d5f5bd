//! Word- and character-level noise injection producing SPELL, ORTH and WO
//! errors.
//!
//! Each candidate word independently draws one of four operations:
//!
//! | op         | word level                                    | tag   |
//! |------------|-----------------------------------------------|-------|
//! | keep       | unchanged                                     | `O`   |
//! | delete     | removed                                       | none  |
//! | insert     | random vocabulary word to the right, or bind  | SPELL / ORTH |
//! |            | with the right neighbour                      |       |
//! | substitute | swap with the right neighbour, or misspell    | WO / SPELL |
//!
//! Misspelling applies the same four operations per character.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{chance, pick};
use crate::taxonomy::{ErrorType, Tag};
use crate::text::{tokenize, Sentence, TagSequence, TokenKind};

const SUM_TOLERANCE: f64 = 1e-9;

/// Probabilities of the four noise operations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OpDistribution {
    pub substitute: f64,
    pub delete: f64,
    pub insert: f64,
    pub keep: f64,
}

impl OpDistribution {
    pub fn new(substitute: f64, delete: f64, insert: f64, keep: f64) -> Result<Self> {
        let mu = OpDistribution { substitute, delete, insert, keep };
        mu.validate()?;
        Ok(mu)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.substitute, self.delete, self.insert, self.keep];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Config(alloc::format!("operation probabilities must be non-negative: {self:?}")));
        }
        let total: f64 = parts.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Config(alloc::format!("operation probabilities sum to {total}, expected 1")));
        }
        Ok(())
    }

    pub fn always_keep() -> Self {
        OpDistribution { substitute: 0.0, delete: 0.0, insert: 0.0, keep: 1.0 }
    }
}

impl Default for OpDistribution {
    fn default() -> Self {
        default_mu()
    }
}

/// `{substitute, delete, insert, keep} = {0.1875, 0.05, 0.0625, 0.7}`.
pub fn default_mu() -> OpDistribution {
    OpDistribution { substitute: 0.1875, delete: 0.05, insert: 0.0625, keep: 0.7 }
}

/// Solves `substitute + insert + delete = 1 - keep` under
/// `insert = ins_over_del * delete` and `substitute = sub_over_ins * insert`.
pub fn derive_mu(keep: f64, ins_over_del: f64, sub_over_ins: f64) -> Result<OpDistribution> {
    if !(0.0..1.0).contains(&keep) {
        return Err(Error::Config(alloc::format!("keep probability must lie in [0, 1), got {keep}")));
    }
    if !(ins_over_del > 0.0 && sub_over_ins > 0.0) {
        return Err(Error::Config("operation ratios must be positive".into()));
    }
    let delete = (1.0 - keep) / (1.0 + ins_over_del + ins_over_del * sub_over_ins);
    let insert = ins_over_del * delete;
    let substitute = sub_over_ins * insert;
    Ok(OpDistribution { substitute, delete, insert, keep })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseOp {
    Keep,
    Delete,
    Insert,
    Substitute,
}

/// Categorical draw with cumulative order substitute, delete, insert, keep.
pub fn sample_word_op<R: Rng + ?Sized>(rng: &mut R, mu: &OpDistribution) -> NoiseOp {
    let u: f64 = rng.gen();
    if u < mu.substitute {
        NoiseOp::Substitute
    } else if u < mu.substitute + mu.delete {
        NoiseOp::Delete
    } else if u < mu.substitute + mu.delete + mu.insert {
        NoiseOp::Insert
    } else {
        NoiseOp::Keep
    }
}

/// Character substitution tables.
#[derive(Debug, Clone, PartialEq)]
pub struct CharMaps {
    pub keyboard_proximity: BTreeMap<char, Vec<char>>,
    pub diacritic_pairs: BTreeMap<char, char>,
    pub common_misspellings: Vec<(String, String)>,
}

const KEYBOARD_ROWS: [&str; 3] = ["qwertyuiopăî", "asdfghjklșțâ", "zxcvbnm"];

const DIACRITICS: [(char, char); 14] = [
    ('ă', 'a'),
    ('â', 'a'),
    ('î', 'i'),
    ('ș', 's'),
    ('ț', 't'),
    ('Ă', 'A'),
    ('Â', 'A'),
    ('Î', 'I'),
    ('Ș', 'S'),
    ('Ț', 'T'),
    ('ş', 's'),
    ('ţ', 't'),
    ('Ş', 'S'),
    ('Ţ', 'T'),
];

const MISSPELLINGS: [(&str, &str); 14] = [
    ("â", "î"),
    ("î", "â"),
    ("iii", "ii"),
    ("ii", "i"),
    ("ea", "ia"),
    ("ia", "ea"),
    ("x", "cs"),
    ("cs", "x"),
    ("ie", "e"),
    ("chi", "ci"),
    ("ghi", "gi"),
    ("oa", "o"),
    ("ce", "che"),
    ("nn", "n"),
];

/// Letters used for random character insertion and substitution.
pub const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyzăâîșț";

impl Default for CharMaps {
    /// Romanian standard layout adjacency, the five diacritic letters in
    /// both cases (plus the legacy cedilla forms), and common confusions.
    fn default() -> Self {
        let rows: Vec<Vec<char>> = KEYBOARD_ROWS.iter().map(|r| r.chars().collect()).collect();
        let mut keyboard_proximity: BTreeMap<char, Vec<char>> = BTreeMap::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, &key) in row.iter().enumerate() {
                let mut near = Vec::new();
                if c > 0 {
                    near.push(row[c - 1]);
                }
                if let Some(&right) = row.get(c + 1) {
                    near.push(right);
                }
                if r > 0 {
                    let above = &rows[r - 1];
                    near.extend(above.get(c).copied());
                    near.extend(above.get(c + 1).copied());
                }
                if let Some(below) = rows.get(r + 1) {
                    if c > 0 {
                        near.extend(below.get(c - 1).copied());
                    }
                    near.extend(below.get(c).copied());
                }
                keyboard_proximity.insert(key, near);
            }
        }
        let mut diacritic_pairs = BTreeMap::new();
        for (marked, plain) in DIACRITICS {
            diacritic_pairs.insert(marked, plain);
        }
        for (marked, plain) in DIACRITICS.iter().take(10) {
            // plain letters map back to the first listed diacritic
            diacritic_pairs.entry(*plain).or_insert(*marked);
        }
        let common_misspellings = MISSPELLINGS.iter().map(|(a, b)| ((*a).into(), (*b).into())).collect();
        CharMaps { keyboard_proximity, diacritic_pairs, common_misspellings }
    }
}

impl CharMaps {
    pub fn validate(&self) -> Result<()> {
        for letter in ['ă', 'â', 'î', 'ș', 'ț', 'Ă', 'Â', 'Î', 'Ș', 'Ț'] {
            if !self.diacritic_pairs.contains_key(&letter) {
                return Err(Error::Config(alloc::format!("diacritic map is missing {letter:?}")));
            }
        }
        if self.common_misspellings.iter().any(|(from, _)| from.is_empty()) {
            return Err(Error::Config("misspelling rules need a non-empty source".into()));
        }
        Ok(())
    }

    /// Controlled replacements for the text starting at `chars[pos]`: each
    /// candidate is `(consumed_chars, replacement)`.
    fn controlled(&self, chars: &[char], pos: usize) -> Vec<(usize, String)> {
        let c = chars[pos];
        let mut out = Vec::new();
        if let Some(&d) = self.diacritic_pairs.get(&c) {
            out.push((1, d.into()));
        }
        let lower = c.to_lowercase().next().unwrap_or(c);
        if let Some(near) = self.keyboard_proximity.get(&lower) {
            for &k in near {
                out.push((1, with_case_of(c, k)));
            }
        }
        for (from, to) in &self.common_misspellings {
            let len = from.chars().count();
            if pos + len <= chars.len() && chars[pos..pos + len].iter().copied().eq(from.chars()) {
                out.push((len, to.clone()));
            }
        }
        out
    }
}

fn with_case_of(model: char, c: char) -> String {
    if model.is_uppercase() {
        c.to_uppercase().collect()
    } else {
        c.into()
    }
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R, model: char) -> String {
    let letters: Vec<char> = ALPHABET.chars().collect();
    with_case_of(model, letters[pick(rng, letters.len())])
}

/// A character-level edit at one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharEdit {
    Keep,
    Delete,
    /// Insert this text right after the character.
    Insert(String),
    /// Interchange with the character to the right.
    Swap,
    /// Replace `len` characters starting here with `with`.
    Replace {
        len: usize,
        with: String,
    },
}

/// Applies `edits`, keyed by character position, to `word`. Positions
/// consumed by an earlier swap or multi-character replacement are skipped.
pub fn apply_char_edits(word: &str, edits: &BTreeMap<usize, CharEdit>) -> String {
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::with_capacity(word.len() + 4);
    let mut i = 0;
    while i < chars.len() {
        match edits.get(&i).unwrap_or(&CharEdit::Keep) {
            CharEdit::Keep => {
                out.push(chars[i]);
                i += 1;
            }
            CharEdit::Delete => i += 1,
            CharEdit::Insert(extra) => {
                out.push(chars[i]);
                out.push_str(extra);
                i += 1;
            }
            CharEdit::Swap if i + 1 < chars.len() => {
                out.push(chars[i + 1]);
                out.push(chars[i]);
                i += 2;
            }
            CharEdit::Swap => {
                out.push(chars[i]);
                i += 1;
            }
            CharEdit::Replace { len, with } => {
                out.push_str(with);
                i += (*len).max(1);
            }
        }
    }
    out
}

fn sample_char_edits<R: Rng + ?Sized>(
    word: &[char],
    char_mu: &OpDistribution,
    maps: &CharMaps,
    rng: &mut R,
) -> BTreeMap<usize, CharEdit> {
    let mut edits = BTreeMap::new();
    let mut i = 0;
    while i < word.len() {
        let c = word[i];
        if !c.is_alphabetic() {
            i += 1;
            continue;
        }
        let mut step = 1;
        let edit = match sample_word_op(rng, char_mu) {
            NoiseOp::Keep => CharEdit::Keep,
            NoiseOp::Delete => CharEdit::Delete,
            NoiseOp::Insert => CharEdit::Insert(random_letter(rng, c)),
            NoiseOp::Substitute => match pick(rng, 3) {
                0 if word.get(i + 1).is_some_and(|n| n.is_alphabetic()) => {
                    step = 2;
                    CharEdit::Swap
                }
                2 => {
                    let options = maps.controlled(word, i);
                    if options.is_empty() {
                        CharEdit::Replace { len: 1, with: random_letter(rng, c) }
                    } else {
                        let (len, with) = options[pick(rng, options.len())].clone();
                        step = len;
                        CharEdit::Replace { len, with }
                    }
                }
                _ => CharEdit::Replace { len: 1, with: random_letter(rng, c) },
            },
        };
        if edit != CharEdit::Keep {
            edits.insert(i, edit);
        }
        i += step;
    }
    edits
}

/// True when `candidate` is a changed word that still tokenizes as a single
/// word token.
fn acceptable_misspelling(original: &str, candidate: &str) -> bool {
    if candidate == original {
        return false;
    }
    let s = tokenize(candidate);
    s.len() == 1 && s.tokens()[0].kind == TokenKind::Word && s.tokens()[0].text == candidate
}

/// Guaranteed change used when sampling keeps failing: swap the first
/// adjacent pair of distinct letters, else replace the first letter.
fn forced_misspelling(word: &str, maps: &CharMaps) -> String {
    let chars: Vec<char> = word.chars().collect();
    for i in 0..chars.len().saturating_sub(1) {
        if chars[i].is_alphabetic() && chars[i + 1].is_alphabetic() && chars[i] != chars[i + 1] {
            let mut edits = BTreeMap::new();
            edits.insert(i, CharEdit::Swap);
            return apply_char_edits(word, &edits);
        }
    }
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphabetic() {
            continue;
        }
        let options = maps.controlled(&chars, i);
        let pick_one = options.iter().find(|(len, _)| *len == 1).map(|(_, w)| w.clone());
        let with = pick_one.unwrap_or_else(|| if c == 'a' { "e".into() } else { with_case_of(c, 'a') });
        let mut edits = BTreeMap::new();
        edits.insert(i, CharEdit::Replace { len: 1, with });
        let out = apply_char_edits(word, &edits);
        if acceptable_misspelling(word, &out) {
            return out;
        }
    }
    let mut out = String::from(word);
    out.push('a');
    out
}

/// Maximum sampling attempts before falling back to a forced swap.
pub const MISSPELL_ATTEMPTS: usize = 10;

/// Misspells `word` by sampling one character operation per letter.
/// Resamples until the result differs from the input and is still a single
/// word token, falling back to an adjacent swap.
pub fn misspell_word<R: Rng + ?Sized>(word: &str, char_mu: &OpDistribution, maps: &CharMaps, rng: &mut R) -> String {
    let chars: Vec<char> = word.chars().collect();
    if char_mu.keep >= 1.0 {
        return word.into();
    }
    for _ in 0..MISSPELL_ATTEMPTS {
        let edits = sample_char_edits(&chars, char_mu, maps, rng);
        let candidate = apply_char_edits(word, &edits);
        if acceptable_misspelling(word, &candidate) {
            return candidate;
        }
    }
    forced_misspelling(word, maps)
}

/// Noise engine settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NoiseConfig {
    pub word_mu: OpDistribution,
    pub char_mu: OpDistribution,
    pub maps: CharMaps,
}

/// Result of corrupting one sentence: the erroneous sentence and its tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corruption {
    pub erroneous: Sentence,
    pub tags: TagSequence,
}

impl Corruption {
    /// Builds the erroneous sentence from token texts, checking that it
    /// re-tokenizes to exactly those texts.
    pub fn from_tokens(texts: Vec<String>, tags: Vec<Tag>) -> Result<Self> {
        debug_assert_eq!(texts.len(), tags.len());
        let erroneous = Sentence::from_token_texts(&texts);
        if erroneous.texts() != texts.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::Validation(alloc::format!(
                "corrupted tokens do not re-tokenize: {:?}",
                erroneous.raw()
            )));
        }
        Ok(Corruption { erroneous, tags: TagSequence(tags) })
    }
}

fn capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

fn lowercase_initial(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn uppercase_initial(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Applies word-level noise to every alphabetic word of `sentence`.
///
/// Decisions are taken left to right on the original tokens; a token
/// consumed by a swap or bind does not draw its own operation. Inserted
/// words are drawn uniformly from `vocabulary` and never equal either
/// neighbour.
pub fn corrupt_sentence_noise<R: Rng + ?Sized>(
    sentence: &Sentence,
    config: &NoiseConfig,
    vocabulary: &[String],
    rng: &mut R,
) -> Corruption {
    let tokens = sentence.tokens();
    let mut texts: Vec<String> = Vec::with_capacity(tokens.len() + 2);
    let mut tags: Vec<Tag> = Vec::with_capacity(tokens.len() + 2);
    let mut i = 0;
    while i < tokens.len() {
        let token = &tokens[i];
        if !token.is_alphabetic_word() {
            texts.push(token.text.clone());
            tags.push(Tag::O);
            i += 1;
            continue;
        }
        let right = tokens.get(i + 1).filter(|t| t.is_alphabetic_word());
        match sample_word_op(rng, &config.word_mu) {
            NoiseOp::Keep => {
                texts.push(token.text.clone());
                tags.push(Tag::O);
            }
            NoiseOp::Delete => {}
            NoiseOp::Insert => {
                let bind = chance(rng, 0.5);
                let next = tokens.get(i + 1).map(|t| t.text.as_str());
                let inserted = pick_insertion(vocabulary, &token.text, next, rng);
                match (bind, right, inserted) {
                    (true, Some(r), _) | (false, Some(r), None) => {
                        let mut bound = token.text.clone();
                        bound.push_str(&r.text);
                        texts.push(bound);
                        tags.push(Tag::Error(ErrorType::Orth));
                        i += 1;
                    }
                    (_, _, Some(word)) => {
                        texts.push(token.text.clone());
                        tags.push(Tag::O);
                        texts.push(word);
                        tags.push(Tag::Error(ErrorType::Spell));
                    }
                    (_, None, None) => {
                        texts.push(token.text.clone());
                        tags.push(Tag::O);
                    }
                }
            }
            NoiseOp::Substitute => {
                let swap = chance(rng, 0.5);
                match right.filter(|r| swap && r.text != token.text) {
                    Some(r) => {
                        let (mut left_text, mut right_text) = (r.text.clone(), token.text.clone());
                        if i == 0 && capitalized(&token.text) && !capitalized(&r.text) {
                            left_text = uppercase_initial(&left_text);
                            right_text = lowercase_initial(&right_text);
                        }
                        texts.push(left_text);
                        texts.push(right_text);
                        tags.push(Tag::Error(ErrorType::Wo));
                        tags.push(Tag::Error(ErrorType::Wo));
                        i += 1;
                    }
                    None => {
                        texts.push(misspell_word(&token.text, &config.char_mu, &config.maps, rng));
                        tags.push(Tag::Error(ErrorType::Spell));
                    }
                }
            }
        }
        i += 1;
    }
    // Every text is either an input token, a concatenation of two words,
    // a vocabulary word or a validated misspelling, so this cannot fail.
    Corruption::from_tokens(texts, tags).expect("noise output re-tokenizes")
}

fn pick_insertion<R: Rng + ?Sized>(
    vocabulary: &[String],
    current: &str,
    next: Option<&str>,
    rng: &mut R,
) -> Option<String> {
    if vocabulary.is_empty() {
        return None;
    }
    for _ in 0..8 {
        let word = &vocabulary[pick(rng, vocabulary.len())];
        if word != current && Some(word.as_str()) != next {
            return Some(word.clone());
        }
    }
    None
}

/// Distinct alphabetic words of `sentences`, in first-seen order.
pub fn build_vocabulary<'a, I: IntoIterator<Item = &'a Sentence>>(sentences: I) -> Vec<String> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut vocabulary = Vec::new();
    for sentence in sentences {
        for token in sentence.tokens() {
            if token.is_alphabetic_word() && seen.insert(token.text.clone()) {
                vocabulary.push(token.text.clone());
            }
        }
    }
    vocabulary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use alloc::string::ToString;

    #[test]
    fn reference_distribution() {
        let mu = default_mu();
        assert_eq!(mu.keep, 0.7);
        assert!((mu.insert / mu.delete - 1.25).abs() < 1e-12);
        assert!((mu.substitute / mu.insert - 3.0).abs() < 1e-12);
        mu.validate().unwrap();
    }

    #[test]
    fn derived_matches_reference() {
        let derived = derive_mu(0.7, 1.25, 3.0).unwrap();
        let mu = default_mu();
        for (a, b) in [
            (derived.substitute, mu.substitute),
            (derived.delete, mu.delete),
            (derived.insert, mu.insert),
            (derived.keep, mu.keep),
        ] {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
        let measured = derive_mu(0.815, 1.25, 3.0).unwrap();
        assert_eq!(measured.keep, 0.815);
        measured.validate().unwrap();
        let limit = derive_mu(1.0 - 1e-12, 1.25, 3.0).unwrap();
        assert!(limit.substitute < 1e-11 && limit.insert < 1e-11 && limit.delete < 1e-11);
        assert!(derive_mu(1.0, 1.25, 3.0).is_err());
        assert!(derive_mu(0.5, 0.0, 3.0).is_err());
    }

    #[test]
    fn degenerate_sampling() {
        let mut rng = seeded(1);
        for _ in 0..1000 {
            assert_eq!(sample_word_op(&mut rng, &OpDistribution::always_keep()), NoiseOp::Keep);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let draws = |seed| {
            let mut rng = seeded(seed);
            (0..200).map(|_| sample_word_op(&mut rng, &default_mu())).collect::<Vec<_>>()
        };
        assert_eq!(draws(5), draws(5));
    }

    #[test]
    fn adjacent_swap() {
        let mut edits = BTreeMap::new();
        edits.insert(1, CharEdit::Swap);
        assert_eq!(apply_char_edits("doctor", &edits), "dcotor");
    }

    #[test]
    fn diacritic_replacement() {
        let maps = CharMaps::default();
        let chars: Vec<char> = "mașină".chars().collect();
        let with = maps.diacritic_pairs[&chars[2]].to_string();
        let mut edits = BTreeMap::new();
        edits.insert(2, CharEdit::Replace { len: 1, with });
        let out = apply_char_edits("mașină", &edits);
        assert_eq!(out, "masină");
        let differing: Vec<usize> =
            out.chars().zip("mașină".chars()).enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i).collect();
        assert_eq!(differing, [2]);
    }

    #[test]
    fn keep_only_misspelling_is_identity() {
        let out = misspell_word("doctor", &OpDistribution::always_keep(), &CharMaps::default(), &mut seeded(3));
        assert_eq!(out, "doctor");
    }

    #[test]
    fn misspelling_always_changes() {
        let maps = CharMaps::default();
        let mut rng = seeded(11);
        for word in ["doctor", "a", "s-a", "aa", "Înalta", "mașină", "ORDINUL"] {
            for _ in 0..200 {
                let out = misspell_word(word, &default_mu(), &maps, &mut rng);
                assert!(acceptable_misspelling(word, &out), "{word} -> {out}");
            }
        }
    }

    #[test]
    fn char_maps_cover_diacritics() {
        let maps = CharMaps::default();
        maps.validate().unwrap();
        assert_eq!(maps.diacritic_pairs[&'ș'], 's');
        assert_eq!(maps.diacritic_pairs[&'Ț'], 'T');
        assert!(maps.keyboard_proximity[&'s'].contains(&'a'));
    }

    #[test]
    fn keep_everything() {
        let s = tokenize("Eu am nu mai zece ani.");
        let config = NoiseConfig { word_mu: OpDistribution::always_keep(), ..NoiseConfig::default() };
        let out = corrupt_sentence_noise(&s, &config, &[], &mut seeded(1));
        assert_eq!(out.erroneous.texts(), s.texts());
        assert!(!out.tags.has_errors());
    }

    #[test]
    fn insert_binds_words() {
        let s = tokenize("nu mai");
        let bind_only = OpDistribution { substitute: 0.0, delete: 0.0, insert: 1.0, keep: 0.0 };
        let config = NoiseConfig { word_mu: bind_only, ..NoiseConfig::default() };
        // Empty vocabulary leaves binding as the only insert branch.
        let out = corrupt_sentence_noise(&s, &config, &[], &mut seeded(4));
        assert_eq!(out.erroneous.texts(), ["numai"]);
        assert_eq!(out.tags.to_string(), "ORTH");
    }

    #[test]
    fn swaps_carry_capitalization() {
        let s = tokenize("Au mai rămas");
        let sub_only = OpDistribution { substitute: 1.0, delete: 0.0, insert: 0.0, keep: 0.0 };
        let config = NoiseConfig { word_mu: sub_only, ..NoiseConfig::default() };
        let mut found = false;
        for seed in 0..50 {
            let out = corrupt_sentence_noise(&s, &config, &[], &mut seeded(seed));
            if out.erroneous.texts()[..2] == ["Mai", "au"] {
                assert_eq!(&out.tags.0[..2], &[Tag::Error(ErrorType::Wo); 2]);
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn tags_always_align() {
        let s = tokenize("Consiliul a aprobat, în ședința din 12 mai 2020, raportul comisiei de specialitate.");
        let vocabulary = build_vocabulary([&s]);
        let config = NoiseConfig::default();
        let mut rng = seeded(2);
        for _ in 0..500 {
            let out = corrupt_sentence_noise(&s, &config, &vocabulary, &mut rng);
            assert_eq!(out.tags.len(), out.erroneous.len());
            let tags = &out.tags.0;
            let mut i = 0;
            while i < tags.len() {
                if tags[i] == Tag::Error(ErrorType::Wo) {
                    assert_eq!(tags.get(i + 1), Some(&Tag::Error(ErrorType::Wo)));
                    i += 2;
                } else {
                    i += 1;
                }
            }
        }
    }

    #[test]
    fn punctuation_and_numerals_untouched() {
        let s = tokenize(", 12 ; 2020 .");
        let out = corrupt_sentence_noise(&s, &NoiseConfig::default(), &["x".into()], &mut seeded(8));
        assert_eq!(out.erroneous.texts(), s.texts());
    }
}
