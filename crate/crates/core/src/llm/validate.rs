use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::align::{align, AlignOp};
use crate::taxonomy::ErrorType;
use crate::text::{tokenize, Sentence};

use super::parse::ParsedCorruption;

/// Why a model's corruption or index list cannot be trusted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationFailure {
    #[error("no modification: the reply repeats the source sentence")]
    NoModification,
    #[error("index out of range: {index} for {len} tokens")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unindexed change at token {position}")]
    UnindexedChange { position: usize },
    #[error("unindexed deletion of source token {position}")]
    UnindexedDeletion { position: usize },
    #[error("indexed tokens are unchanged")]
    IndexedTokensUnchanged,
}

/// Checks a parsed reply against its source sentence. A pass means the index
/// list covers every edit and marks at least one edited token, so it can be
/// turned into tags directly.
///
/// A deleted source token is covered when an indexed token sits right next
/// to the gap it leaves.
pub fn validate_corruption(
    correct: &Sentence,
    parsed: &ParsedCorruption,
    _error: ErrorType,
) -> Result<(), Vec<ValidationFailure>> {
    let erroneous = tokenize(&parsed.erroneous_sentence);
    let source = correct.texts();
    let target = erroneous.texts();
    if parsed.erroneous_sentence.trim() == correct.raw().trim() || source == target {
        return Err(alloc::vec![ValidationFailure::NoModification]);
    }

    let mut failures = Vec::new();
    let len = erroneous.len();
    for &index in &parsed.indices {
        if index >= len {
            failures.push(ValidationFailure::IndexOutOfRange { index, len });
        }
    }
    let indexed: BTreeSet<usize> = parsed.indices.iter().copied().collect();

    let mut touched = false;
    // Erroneous-side tokens consumed so far; a deletion sits between
    // `consumed - 1` and `consumed`.
    let mut consumed = 0;
    for op in align(&source, &target) {
        match op {
            AlignOp::Equal { .. } => consumed += 1,
            AlignOp::Substitute { tgt, .. } | AlignOp::Insert { tgt } => {
                if indexed.contains(&tgt) {
                    touched = true;
                } else {
                    failures.push(ValidationFailure::UnindexedChange { position: tgt });
                }
                consumed += 1;
            }
            AlignOp::Delete { src } => {
                let adjacent = indexed.contains(&consumed) || (consumed > 0 && indexed.contains(&(consumed - 1)));
                if !adjacent {
                    failures.push(ValidationFailure::UnindexedDeletion { position: src });
                }
            }
        }
    }
    if !touched {
        failures.push(ValidationFailure::IndexedTokensUnchanged);
    }

    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    const SOURCE: &str = "Aprobată prin ORDINUL nr. 304 din 19 octombrie 2020, publicat în Monitorul Oficial al României, Partea I, nr. 1026 din 4 noiembrie 2020.";
    const CORRUPTED: &str = "Aprobată prin ORDINUL nr. 304 din 19 octombrie 2020, publicat în Monitorul cel mai Oficial al României, Partea I, nr. 1026 din 4 noiembrie 2020.";

    fn check(source: &str, erroneous: &str, indices: Vec<usize>) -> Result<(), Vec<ValidationFailure>> {
        validate_corruption(&tokenize(source), &ParsedCorruption::corrupted(erroneous, indices), ErrorType::AdjForm)
    }

    #[test]
    fn adjective_degree_reply_passes() {
        assert_eq!(check(SOURCE, CORRUPTED, vec![14, 15, 16]), Ok(()));
        assert_eq!(check(SOURCE, CORRUPTED, vec![14, 15]), Ok(()));
    }

    #[test]
    fn unchanged_reply_fails() {
        let failures = check(SOURCE, SOURCE, vec![11]).unwrap_err();
        assert_eq!(failures, vec![ValidationFailure::NoModification]);
        assert!(failures[0].to_string().starts_with("no modification"));
    }

    #[test]
    fn out_of_range_index_fails() {
        let source =
            "unu doi trei patru cinci șase șapte opt nouă zece unu doi trei patru cinci șase șapte opt nouă zece";
        let erroneous = source.replacen("trei", "tri", 1);
        assert_eq!(tokenize(source).len(), 20);
        let failures = check(source, &erroneous, vec![2, 99]).unwrap_err();
        assert_eq!(failures, vec![ValidationFailure::IndexOutOfRange { index: 99, len: 20 }]);
        assert!(failures[0].to_string().starts_with("index out of range"));
    }

    #[test]
    fn index_list_must_cover_edits() {
        assert_eq!(
            check("Ei au plecat acasă.", "Ei a plecat acas.", vec![1]).unwrap_err(),
            vec![ValidationFailure::UnindexedChange { position: 3 }]
        );
        assert_eq!(
            check("Ei au plecat acasă.", "Ei au plecat acasă!", vec![0]).unwrap_err(),
            vec![ValidationFailure::UnindexedChange { position: 4 }, ValidationFailure::IndexedTokensUnchanged]
        );
    }

    #[test]
    fn deletions_need_an_indexed_neighbour() {
        assert_eq!(
            check("Ei au plecat foarte repede.", "Ei au plecat repede!", vec![4]).unwrap_err(),
            vec![ValidationFailure::UnindexedDeletion { position: 3 }]
        );
        assert_eq!(check("Ei au plecat foarte repede.", "Ei au plecat repede!", vec![3, 4]), Ok(()));
        assert_eq!(check("Ei au plecat foarte repede.", "Ei au plecat repede!", vec![2, 4]), Ok(()));
    }
}
