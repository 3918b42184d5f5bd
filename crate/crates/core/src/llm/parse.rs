use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Corrupted,
    NoPartOfSpeech,
}

/// A model reply reduced to the corrupted sentence and its index list.
/// Indices are sorted and deduplicated; both fields are empty for
/// [`Verdict::NoPartOfSpeech`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedCorruption {
    pub erroneous_sentence: String,
    pub indices: Vec<usize>,
    pub verdict: Verdict,
}

impl ParsedCorruption {
    pub fn corrupted(sentence: impl Into<String>, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        ParsedCorruption { erroneous_sentence: sentence.into(), indices, verdict: Verdict::Corrupted }
    }

    pub fn no_part_of_speech() -> Self {
        ParsedCorruption { erroneous_sentence: String::new(), indices: Vec::new(), verdict: Verdict::NoPartOfSpeech }
    }
}

const MARKERS: [&str; 2] = ["index:", "indice:"];
const DELIMITERS: [(&str, &str); 4] = [("<<", ">>"), ("\"", "\""), ("“", "”"), ("„", "”")];

fn parse_error(reason: &str, raw: &str) -> Error {
    Error::Parse { reason: reason.to_string(), raw: raw.to_string() }
}

/// Byte offset of the last case-insensitive index marker and its length.
fn find_marker(text: &str) -> Option<(usize, usize)> {
    // ASCII lowercasing keeps byte offsets aligned with `text`.
    let lower = text.to_ascii_lowercase();
    MARKERS.iter().filter_map(|m| lower.rfind(m).map(|at| (at, m.len()))).max_by_key(|(at, _)| *at)
}

fn strip_answer_label(text: &str) -> &str {
    match text.strip_prefix("ANSWER") {
        Some(rest) if rest.starts_with(':') => rest[1..].trim_start(),
        Some(rest) if rest.starts_with(char::is_whitespace) => {
            let rest = rest.trim_start();
            rest.strip_prefix(':').unwrap_or(rest).trim_start()
        }
        _ => text,
    }
}

fn strip_delimiters(mut text: &str) -> &str {
    for (open, close) in DELIMITERS {
        if text.len() >= open.len() + close.len() {
            if let Some(inner) = text.strip_prefix(open).and_then(|t| t.strip_suffix(close)) {
                text = inner.trim();
            }
        }
    }
    text
}

fn parse_indices(list: &str, raw: &str) -> Result<Vec<usize>> {
    let list = list.trim_start();
    let Some(body) = list.strip_prefix('[') else {
        return Err(parse_error("index list is not bracketed", raw));
    };
    let Some(end) = body.find(']') else {
        return Err(parse_error("index list has no closing bracket", raw));
    };
    let body = body[..end].trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|item| item.trim().parse::<usize>().map_err(|_| parse_error(&format!("bad index {:?}", item.trim()), raw)))
        .collect()
}

/// Parses a model reply: `NO`, or a sentence followed by `Index: [..]`
/// (`Indice:` is accepted too).
pub fn parse_llm_response(text: &str) -> Result<ParsedCorruption> {
    let trimmed = text.trim();
    let bare = trimmed.strip_suffix('.').unwrap_or(trimmed).trim();
    if bare.eq_ignore_ascii_case("no") {
        return Ok(ParsedCorruption::no_part_of_speech());
    }
    let Some((at, len)) = find_marker(trimmed) else {
        return Err(parse_error("missing index list", text));
    };
    let indices = parse_indices(&trimmed[at + len..], text)?;
    let sentence = strip_delimiters(strip_answer_label(trimmed[..at].trim())).trim();
    if sentence.is_empty() {
        return Err(parse_error("empty sentence", text));
    }
    Ok(ParsedCorruption::corrupted(sentence, indices))
}

/// Renders a parsed reply back to the wire format the parser accepts.
pub fn render_response(parsed: &ParsedCorruption) -> String {
    match parsed.verdict {
        Verdict::NoPartOfSpeech => "NO".into(),
        Verdict::Corrupted => {
            let list: Vec<String> = parsed.indices.iter().map(|i| i.to_string()).collect();
            format!("\"{}\"\n\nIndex: [{}]", parsed.erroneous_sentence, list.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_shot_reply() {
        let reply = "\"Aprobată prin ORDINUL nr. 304 din 19 octombrie 2020, publicat în Monitorul cel mai Oficial al României, Partea I, nr. 1026 din 4 noiembrie 2020.\"\n\nIndex: [14, 15, 16]";
        let parsed = parse_llm_response(reply).unwrap();
        assert_eq!(parsed.verdict, Verdict::Corrupted);
        assert_eq!(parsed.indices, vec![14, 15, 16]);
        assert!(parsed.erroneous_sentence.starts_with("Aprobată prin"));
        assert!(parsed.erroneous_sentence.ends_with("2020."));
    }

    #[test]
    fn no_reply() {
        for reply in ["NO", " no \n", "No."] {
            assert_eq!(parse_llm_response(reply).unwrap().verdict, Verdict::NoPartOfSpeech);
        }
    }

    #[test]
    fn romanian_marker_and_labels() {
        let parsed = parse_llm_response("Eu merge acasă.\nIndice: [0, 1, 2]").unwrap();
        assert_eq!(parsed.indices, vec![0, 1, 2]);
        assert_eq!(parsed.erroneous_sentence, "Eu merge acasă.");
        let parsed = parse_llm_response("ANSWER: <<Ei a plecat.>> INDEX: [2, 1, 1]").unwrap();
        assert_eq!(parsed.erroneous_sentence, "Ei a plecat.");
        assert_eq!(parsed.indices, vec![1, 2]);
    }

    #[test]
    fn malformed_replies() {
        let err = parse_llm_response("Sure, here you go").unwrap_err();
        assert!(matches!(err, Error::Parse { ref raw, .. } if raw == "Sure, here you go"));
        assert!(parse_llm_response("x Index: 1, 2").is_err());
        assert!(parse_llm_response("x Index: [1, 2").is_err());
        assert!(parse_llm_response("x Index: [1, -2]").is_err());
        assert!(parse_llm_response("\"\" Index: [1]").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn render_then_parse_is_identity(
                sentence in "[a-zA-Zăîșț]{1,8}( [a-zA-Z0-9ăîșț,.!?\"-]{1,8}){0,8}",
                indices in proptest::collection::vec(0usize..40, 0..6),
            ) {
                let sentence = sentence.trim().to_string();
                prop_assume!(!sentence.starts_with("ANSWER"));
                prop_assume!(!sentence.eq_ignore_ascii_case("no"));
                let lower = sentence.to_ascii_lowercase();
                prop_assume!(!lower.contains("index:") && !lower.contains("indice:"));
                let parsed = ParsedCorruption::corrupted(sentence, indices);
                prop_assert_eq!(parse_llm_response(&render_response(&parsed)).unwrap(), parsed);
            }
        }
    }
}
