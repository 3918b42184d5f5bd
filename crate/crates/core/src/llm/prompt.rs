use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::taxonomy::{ErrorType, Method};

use super::ces::CesEntry;

const ZERO_SHOT_OPENING: &str =
    "You are a grammar assistant tasked with introducing common unacceptable errors within a correct Romanian language sentence.";
const TWO_SHOT_OPENING: &str =
    "You are a grammar assistant tasked with introducing common unacceptable errors in a correct Romanian sentence.";
const CAREFUL: &str = "Think very carefully about the task at hand, and analyze each part of speech in detail. If the specified part of speech does not exist in the sentence, strictly reply with NO.";
const ZERO_SHOT_REPLY: &str =
    "Otherwise, reply strictly with the erroneous sentence, followed by Index: and the positions of the words you have changed.";
const TWO_SHOT_REPLY: &str = "Otherwise, reply strictly with the erroneous sentence, marked with ANSWER, followed by Index: and the positions of the words you have changed.";

fn default_instruction(error: ErrorType) -> &'static str {
    use ErrorType::*;
    match error {
        Adj => "replace an adjective with one that is inappropriate for the sentence context",
        AdjForm => "change the degree of an adjective erroneously",
        Adv => "use an adverb erroneously in a sentence",
        Conj => "replace a conjunction with an erroneous one",
        Det => "replace a determiner with an erroneous one",
        Morph => "replace a word with a misused word stemming from the same root",
        Noun => "use a noun inappropriately in a sentence",
        NounInfl => "use an incorrect inflection form of a plural noun",
        NounNum => "change the number of a noun incorrectly",
        NounPoss => "create a disagreement between a noun and its possessive article erroneously",
        Orth => "misuse whitespace so that the meaning of a word changes",
        Prep => "replace a preposition with an erroneous one",
        Pron => "replace a pronoun with an erroneous one",
        Punct => "use punctuation inappropriately",
        Spell => "misspell a word",
        Verb => "replace a verb with one that is inappropriate for the sentence context",
        VerbForm => "use an erroneous form of a verb",
        VerbSva => "create a disagreement between a verb and a subject in a sentence",
        VerbTense => "create a difference in tense between a verb and the rest of the phrase",
        Wo => "change the order of words incorrectly",
    }
}

/// Per-error instruction phrases and the method each error is generated
/// with. Both can be overridden from configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptBook {
    instructions: BTreeMap<ErrorType, String>,
    methods: BTreeMap<ErrorType, Method>,
}

impl Default for PromptBook {
    fn default() -> Self {
        PromptBook {
            instructions: ErrorType::ALL.iter().map(|e| (*e, String::from(default_instruction(*e)))).collect(),
            methods: ErrorType::ALL.iter().map(|e| (*e, e.default_method())).collect(),
        }
    }
}

impl PromptBook {
    pub fn with_methods(mut self, methods: &BTreeMap<ErrorType, Method>) -> Self {
        self.methods.extend(methods.iter().map(|(e, m)| (*e, *m)));
        self
    }

    pub fn set_instruction(&mut self, error: ErrorType, phrase: String) {
        self.instructions.insert(error, phrase);
    }

    pub fn instruction(&self, error: ErrorType) -> &str {
        &self.instructions[&error]
    }

    pub fn method(&self, error: ErrorType) -> Method {
        self.methods[&error]
    }

    fn require(&self, error: ErrorType, method: Method) -> Result<()> {
        let actual = self.method(error);
        if actual != method {
            return Err(Error::Usage(format!("{error} is generated with {actual:?}, not {method:?}")));
        }
        Ok(())
    }

    pub fn zero_shot(&self, error: ErrorType, sentence: &str) -> Result<String> {
        self.require(error, Method::ZeroShotLLM)?;
        Ok(format!(
            "{ZERO_SHOT_OPENING} For this task, you will have to {} in the following sentence: <<{sentence}>>. {CAREFUL} {ZERO_SHOT_REPLY}",
            self.instruction(error)
        ))
    }

    pub fn two_shot(&self, error: ErrorType, sentence: &str, first: &CesEntry, second: &CesEntry) -> Result<String> {
        self.require(error, Method::TwoShotLLM)?;
        Ok(format!(
            "{TWO_SHOT_OPENING} For this task, {}, such that an erroneous sentence is created.\n\n\
             For example, the sentence <<{}>> will be turned into <<{}>>\n\n\
             For example, the sentence <<{}>> will be turned into <<{}>>\n\n\
             So, the sentence <<{sentence}>> will be turned into ANSWER.\n\n\
             {CAREFUL} {TWO_SHOT_REPLY}",
            self.instruction(error),
            first.correct,
            first.erroneous,
            second.correct,
            second.erroneous,
        ))
    }
}

/// Zero-shot prompt with the built-in instruction phrases.
pub fn build_zero_shot_prompt(error: ErrorType, sentence: &str) -> Result<String> {
    PromptBook::default().zero_shot(error, sentence)
}

/// Two-shot prompt with the built-in instruction phrases. `first` is shown
/// before `second`.
pub fn build_two_shot_prompt(error: ErrorType, sentence: &str, first: &CesEntry, second: &CesEntry) -> Result<String> {
    PromptBook::default().two_shot(error, sentence, first, second)
}
