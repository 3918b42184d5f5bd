use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxonomy::ErrorType;
use crate::text::{diff_tags, tokenize, TagSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    SeedBook,
    LlmGenerated,
}

/// One (erroneous, correct, tags) exemplar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CesEntry {
    pub erroneous: String,
    pub correct: String,
    pub tags: TagSequence,
    pub origin: Origin,
}

impl CesEntry {
    /// Builds an entry, deriving tags from the token alignment.
    pub fn new(erroneous: &str, correct: &str, origin: Origin, error: ErrorType) -> Result<Self> {
        let tags = diff_tags(&tokenize(correct), &tokenize(erroneous), error);
        let entry = CesEntry { erroneous: erroneous.into(), correct: correct.into(), tags, origin };
        entry.validate()?;
        Ok(entry)
    }

    pub fn validate(&self) -> Result<()> {
        if self.erroneous == self.correct {
            return Err(Error::Validation(alloc::format!("CES entry is unchanged: {:?}", self.correct)));
        }
        if !self.tags.has_errors() {
            return Err(Error::Validation(alloc::format!("CES entry has no error tag: {:?}", self.erroneous)));
        }
        let tokens = tokenize(&self.erroneous).len();
        if tokens != self.tags.len() {
            return Err(Error::Validation(alloc::format!(
                "CES entry has {} tags for {tokens} tokens: {:?}",
                self.tags.len(),
                self.erroneous
            )));
        }
        Ok(())
    }
}

/// Exemplars for one error type. Enrichment may grow it to at most twice
/// the number of seed-book entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionExampleSet {
    pub error_type: ErrorType,
    pub entries: Vec<CesEntry>,
    pub initial_size: usize,
}

impl CorruptionExampleSet {
    pub fn new(error_type: ErrorType, entries: Vec<CesEntry>) -> Result<Self> {
        for entry in &entries {
            entry.validate()?;
        }
        let initial_size = entries.iter().filter(|e| e.origin == Origin::SeedBook).count();
        Ok(CorruptionExampleSet { error_type, entries, initial_size })
    }

    pub fn capacity(&self) -> usize {
        2 * self.initial_size
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Built-in seed set for `error`.
    pub fn seed(error: ErrorType) -> Self {
        CorruptionExampleSet::new(error, seed_book(error)).expect("seed book entries are valid")
    }
}

/// (error, erroneous, correct) common-error exemplars.
const SEED_BOOK: &[(ErrorType, &str, &str)] = &[
    (ErrorType::Adj, "Finalele cinci partide au semnat acordul.", "Ultimele cinci partide au semnat acordul."),
    (ErrorType::Adj, "A fost o ședință înaltă și obositoare.", "A fost o ședință lungă și obositoare."),
    (ErrorType::Adv, "Am mâncat decât migdale.", "Am mâncat doar migdale."),
    (ErrorType::Adv, "Bună dimineața, dragele mele!", "Bună dimineața, dragile mele!"),
    (ErrorType::Morph, "Consumați minim 2 litri de apă.", "Consumați minimum 2 litri de apă."),
    (ErrorType::Morph, "Prețul este maxim 100 de lei.", "Prețul este maximum 100 de lei."),
    (ErrorType::Noun, "Le-am spus la copii planul.", "Le-am spus copiilor planul."),
    (ErrorType::Noun, "Am dat cartea la fratele meu.", "Am dat cartea fratelui meu."),
    (ErrorType::NounInfl, "Mai ai și succesuri.", "Mai ai și succese."),
    (ErrorType::NounInfl, "Am cumpărat două cutii de chibrite.", "Am cumpărat două cutii de chibrituri."),
    (ErrorType::NounNum, "Am comandat doi hamburger.", "Am comandat doi hamburgeri."),
    (ErrorType::NounNum, "Am cumpărat trei kilogram de mere.", "Am cumpărat trei kilograme de mere."),
    (ErrorType::Verb, "Președinții se urmează o dată la 4 ani.", "Președinții se succedă o dată la 4 ani."),
    (ErrorType::Verb, "Am efectuat o greșeală în raport.", "Am făcut o greșeală în raport."),
    (ErrorType::VerbForm, "Nu fă și tu aceeași greșeală.", "Nu face și tu aceeași greșeală."),
    (ErrorType::VerbForm, "Vroiam să plec mai devreme.", "Voiam să plec mai devreme."),
    (ErrorType::VerbSva, "Mi s-a făcut vrăji.", "Mi s-au făcut vrăji."),
    (ErrorType::VerbSva, "Tinerii a luat cu asalt locația.", "Tinerii au luat cu asalt locația."),
    (ErrorType::VerbTense, "Voi bănui că așa e politica.", "Bănuiesc că așa e politica."),
    (ErrorType::VerbTense, "Ieri merg la piață.", "Ieri am mers la piață."),
    (ErrorType::AdjForm, "Rezultatul este foarte excelent.", "Rezultatul este excelent."),
    (ErrorType::NounPoss, "Poșeta este a lui prietena mele.", "Poșeta este a prietenei mele."),
];

/// Seed-book entries for `error`, tagged by alignment. Error types generated
/// by two-shot prompting have at least two entries.
pub fn seed_book(error: ErrorType) -> Vec<CesEntry> {
    SEED_BOOK
        .iter()
        .filter(|(e, _, _)| *e == error)
        .map(|(e, erroneous, correct)| {
            CesEntry::new(erroneous, correct, Origin::SeedBook, *e).expect("valid seed entry")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::Method;
    use alloc::string::ToString;

    #[test]
    fn every_two_shot_type_has_two_seeds() {
        for error in ErrorType::ALL.into_iter().filter(|e| e.default_method() == Method::TwoShotLLM) {
            assert!(seed_book(error).len() >= 2, "{error}");
        }
    }

    #[test]
    fn seed_tags_mark_the_error() {
        let adv = seed_book(ErrorType::Adv);
        assert_eq!(adv[1].tags.to_string(), "O O O ADV O O");
        let noun = seed_book(ErrorType::Noun);
        assert_eq!(noun[0].tags.to_string(), "O O NOUN NOUN O O");
        let sva = seed_book(ErrorType::VerbSva);
        assert_eq!(sva[0].tags.to_string(), "O VERB:SVA O O O");
    }

    #[test]
    fn invalid_entries_rejected() {
        assert!(CesEntry::new("la fel", "la fel", Origin::SeedBook, ErrorType::Adj).is_err());
        // deletion only: changed text but nothing to tag
        assert!(CesEntry::new("a c", "a b c", Origin::SeedBook, ErrorType::Adj).is_err());
        let mut bad = seed_book(ErrorType::Adv).remove(0);
        bad.tags.0.pop();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn capacity_is_twice_the_seed_count() {
        let ces = CorruptionExampleSet::seed(ErrorType::VerbSva);
        assert_eq!(ces.initial_size, 2);
        assert_eq!(ces.capacity(), 4);
        assert!(!ces.is_full());
    }
}
