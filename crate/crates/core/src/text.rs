//! Tokenization, detokenization and tag sequences.
//!
//! Tokens are maximal runs of letters and digits. A hyphen or apostrophe
//! between two such characters stays inside the token (`s-a`, `Le-am`), and
//! `.` or `,` between digits stays inside a numeral (`1.026`). Every other
//! non-space character is its own punctuation token, so the period of an
//! abbreviation such as `nr.` is split off. Token indices are 0-based.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::align::{self, AlignOp};
use crate::error::{Error, Result};
use crate::taxonomy::{ErrorType, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punct,
    Numeral,
}

/// A token with its `[start, end)` span in characters (not bytes) of the
/// source text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub span: (usize, usize),
}

impl Token {
    /// A word that noise may corrupt: contains at least one letter.
    pub fn is_alphabetic_word(&self) -> bool {
        self.kind == TokenKind::Word && self.text.chars().any(char::is_alphabetic)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.text
    }
}

fn is_combining(c: char) -> bool {
    matches!(c as u32, 0x0300..=0x036F)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining(c)
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '’' | '\u{2011}')
}

fn is_digit_separator(c: char) -> bool {
    matches!(c, '.' | ',')
}

fn is_numeral(chars: &[char]) -> bool {
    chars.first().is_some_and(char::is_ascii_digit)
        && chars.iter().all(|c| c.is_ascii_digit() || is_digit_separator(*c))
}

/// Splits `text` into word, numeral and punctuation tokens.
pub fn tokenize(text: &str) -> Sentence {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !is_word_char(c) {
            tokens.push(Token { text: c.into(), kind: TokenKind::Punct, span: (i, i + 1) });
            i += 1;
            continue;
        }
        let start = i;
        let mut j = i + 1;
        while j < n {
            let here = chars[j];
            let glued = j + 1 < n && is_word_char(chars[j + 1]) && is_word_char(chars[j - 1]);
            if is_word_char(here)
                || (glued && is_joiner(here))
                || (glued && is_digit_separator(here) && chars[j + 1].is_ascii_digit() && is_numeral(&chars[start..j]))
            {
                j += 1;
            } else {
                break;
            }
        }
        let run = &chars[start..j];
        let kind = if is_numeral(run) { TokenKind::Numeral } else { TokenKind::Word };
        tokens.push(Token { text: run.iter().collect(), kind, span: (start, j) });
        i = j;
    }
    Sentence { raw: text.into(), tokens }
}

fn closes(token: &str) -> bool {
    matches!(token, "." | "," | ";" | ":" | "?" | "!" | ")" | "]" | "}" | "”" | "»" | "…")
}

fn opens(token: &str) -> bool {
    matches!(token, "(" | "[" | "{" | "„" | "«")
}

/// Joins tokens with single spaces, except before closing punctuation and
/// after opening brackets or quotes.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut prev: Option<&str> = None;
    for token in tokens {
        let token = token.as_ref();
        if let Some(p) = prev {
            if !closes(token) && !opens(p) {
                out.push(' ');
            }
        }
        out.push_str(token);
        prev = Some(token);
    }
    out
}

/// Raw text plus its tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sentence {
    raw: String,
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn parse(raw: &str) -> Self {
        tokenize(raw)
    }

    /// Detokenizes `texts` and re-tokenizes the result.
    pub fn from_token_texts<S: AsRef<str>>(texts: &[S]) -> Self {
        tokenize(&detokenize(texts))
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl Serialize for Sentence {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for Sentence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Ok(tokenize(&raw))
    }
}

/// One tag per token of the sentence it annotates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TagSequence(pub Vec<Tag>);

impl TagSequence {
    pub fn all_o(len: usize) -> Self {
        TagSequence(alloc::vec![Tag::O; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tags(&self) -> &[Tag] {
        &self.0
    }

    pub fn error_positions(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, t)| t.is_error()).map(|(i, _)| i).collect()
    }

    pub fn error_count(&self) -> usize {
        self.0.iter().filter(|t| t.is_error()).count()
    }

    pub fn has_errors(&self) -> bool {
        self.0.iter().any(|t| t.is_error())
    }

    pub fn error_types(&self) -> Vec<ErrorType> {
        let mut types: Vec<ErrorType> = self.0.iter().filter_map(|t| t.error()).collect();
        types.sort();
        types.dedup();
        types
    }
}

impl fmt::Display for TagSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tag) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(tag.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for TagSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(TagSequence)
    }
}

impl FromIterator<Tag> for TagSequence {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        TagSequence(iter.into_iter().collect())
    }
}

/// Tags `indices` with `error` and every other position with `O`.
pub fn indices_to_tags(token_count: usize, indices: &[usize], error: ErrorType) -> Result<TagSequence> {
    let mut tags = TagSequence::all_o(token_count);
    for &index in indices {
        if index >= token_count {
            return Err(Error::IndexOutOfRange { index, len: token_count });
        }
        tags.0[index] = Tag::Error(error);
    }
    Ok(tags)
}

/// Tags every erroneous-side token that the alignment substitutes or
/// inserts. Deleted correct-side tokens have no erroneous counterpart and
/// leave no tag.
pub fn diff_tags(correct: &Sentence, erroneous: &Sentence, error: ErrorType) -> TagSequence {
    let mut tags = TagSequence::all_o(erroneous.len());
    for op in align::align(&correct.texts(), &erroneous.texts()) {
        match op {
            AlignOp::Substitute { tgt, .. } | AlignOp::Insert { tgt } => tags.0[tgt] = Tag::Error(error),
            AlignOp::Equal { .. } | AlignOp::Delete { .. } => {}
        }
    }
    tags
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn token_text() -> impl Strategy<Value = String> {
        prop_oneof![
            "[a-zăâîșț]{1,6}",
            "[A-Z][a-z]{0,4}",
            "[a-z]{1,3}-[a-z]{1,3}",
            "[0-9]{1,4}",
            "[0-9]{1,2}\\.[0-9]{3}",
            prop::sample::select(alloc::vec![".", ",", ";", ":", "?", "!", "(", ")", "-", "„", "”", "\"", "%"])
                .prop_map(String::from),
        ]
    }

    proptest! {
        #[test]
        fn retokenizing_detokenized_tokens_is_stable(texts in prop::collection::vec(token_text(), 0..12)) {
            let s = Sentence::from_token_texts(&texts);
            prop_assert_eq!(s.texts(), texts.iter().map(String::as_str).collect::<Vec<_>>());
        }

        #[test]
        fn spans_strictly_increase(text in "[a-zș ,.;-]{0,40}") {
            let s = tokenize(&text);
            for pair in s.tokens().windows(2) {
                prop_assert!(pair[0].span.1 <= pair[1].span.0);
            }
            for t in s.tokens() {
                prop_assert!(t.span.0 < t.span.1);
                match t.kind {
                    TokenKind::Punct => prop_assert!(t.text.chars().all(|c| !c.is_alphanumeric())),
                    TokenKind::Numeral => prop_assert!(t.text.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',')),
                    TokenKind::Word => {}
                }
            }
        }

        #[test]
        fn self_diff_is_clean(text in "[a-z ,.]{0,40}") {
            let s = tokenize(&text);
            prop_assert!(!diff_tags(&s, &s, ErrorType::Spell).has_errors());
        }

        #[test]
        fn index_tags_recover_indices(len in 1usize..30, raw in prop::collection::vec(0usize..30, 0..10)) {
            let indices: Vec<usize> = raw.into_iter().filter(|i| *i < len).collect();
            let tags = indices_to_tags(len, &indices, ErrorType::Wo).unwrap();
            let mut expected = indices.clone();
            expected.sort();
            expected.dedup();
            prop_assert_eq!(tags.error_positions(), expected);
        }
    }
}
