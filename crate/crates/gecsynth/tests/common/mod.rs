//! Shared test material: a deterministic desk corpus and a simulated model
//! whose replies are recorded into fixtures.

#![allow(dead_code)]

use std::path::Path;

use gecsynth::files::{write_jsonl, CorpusRecord};
use gecsynth_core::llm::{ClientError, LlmClient, LlmRequest, LlmResponse};
use gecsynth_core::rng::{pick, seeded, stable_hash_hex, SeededRng};
use gecsynth_core::text::{detokenize, tokenize};
use gecsynth_core::TokenKind;

const SUBJECTS: &[&str] = &[
    "Comisia",
    "Guvernul",
    "Parlamentul",
    "Curtea Constituțională",
    "Ministerul Justiției",
    "Consiliul local",
    "Autoritatea de reglementare",
    "Instanța de fond",
    "Președintele tribunalului",
    "Senatul",
    "Camera Deputaților",
    "Agenția Națională de Administrare Fiscală",
];
const VERBS: &[&str] = &[
    "a aprobat",
    "a respins",
    "a transmis",
    "a adoptat",
    "a analizat",
    "a publicat",
    "a modificat",
    "a examinat",
    "a semnat",
    "a contestat",
];
const OBJECTS: &[&str] = &[
    "proiectul de lege",
    "raportul anual",
    "hotărârea",
    "ordonanța de urgență",
    "cererea reclamantului",
    "decizia",
    "regulamentul intern",
    "bugetul de stat",
    "amendamentele depuse",
    "avizul consultativ",
];
const PHRASES: &[&str] = &[
    "în ședința din 12 martie 2019",
    "pentru dezbatere și vot final",
    "la data de 4 noiembrie 2020",
    "prin votul majorității",
    "cu privire la taxele locale",
    "către comisiile de specialitate",
    "pe baza expunerii de motive",
    "din oficiu",
    "în termen de 30 de zile",
    "după consultarea publică",
];
const CLAUSES: &[&str] = &[
    ", iar părțile au fost citate legal",
    ", dar nu a motivat soluția",
    " și a dispus publicarea în Monitorul Oficial",
    ", deoarece termenul a expirat",
    "; această măsură este provizorie",
    ", care a fost contestată de pârât",
    " sau a amânat pronunțarea",
    "",
    "",
];
const ARTICLES: &[&str] = &["art. 12 alin. (2)", "art. 5 lit. b)", "art. 147 alin. (4)", "art. 31"];
const PASSIVES: &[&str] = &["se aplică", "se abrogă", "se completează", "se modifică", "se publică"];

const OPENINGS: &[&str] = &["Doamnă președintă", "Domnule comisar", "Stimați colegi", "Doamnelor și domnilor"];
const WISHES: &[&str] = &[
    "aș dori să mulțumesc raportorului pentru munca depusă",
    "consider că această propunere este necesară",
    "trebuie să sprijinim statele membre în această criză",
    "nu putem accepta o astfel de abordare",
    "salut acordul obținut cu Consiliul",
    "cetățenii așteaptă de la noi soluții concrete",
];
const REASONS: &[&str] = &[
    "pentru că piața internă are nevoie de reguli clare",
    "deoarece fondurile europene sunt limitate",
    "iar Comisia trebuie să prezinte un calendar",
    "dar dezbaterea nu s-a încheiat",
    "astfel încât tinerii să găsească locuri de muncă",
    "",
];

fn choose<'a>(rng: &mut SeededRng, items: &[&'a str]) -> &'a str {
    items[pick(rng, items.len())]
}

const TAILS: &[&str] = &[
    "în conformitate cu prevederile Codului de procedură civilă",
    "cu respectarea dreptului la apărare al părților",
    "potrivit normelor metodologice aprobate de Guvern",
    "fără a aduce atingere drepturilor dobândite anterior",
    "sub rezerva controlului exercitat de instanța de contencios administrativ",
    "în limitele competenței stabilite prin lege",
];

fn capitalize(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn legal_sentence(rng: &mut SeededRng) -> String {
    let body = match pick(rng, 3) {
        0 => format!(
            "{} {} {} {}, {}{}",
            choose(rng, SUBJECTS),
            choose(rng, VERBS),
            choose(rng, OBJECTS),
            choose(rng, PHRASES),
            choose(rng, TAILS),
            choose(rng, CLAUSES)
        ),
        1 => format!(
            "Potrivit {}, {} {} {}, {}",
            choose(rng, ARTICLES),
            capitalize(choose(rng, OBJECTS)),
            choose(rng, PASSIVES),
            choose(rng, PHRASES),
            choose(rng, TAILS)
        ),
        _ => format!(
            "{} nu a comunicat punctul său de vedere asupra excepției ridicate {}, iar {} {} {}{}",
            choose(rng, SUBJECTS),
            choose(rng, PHRASES),
            choose(rng, SUBJECTS).to_lowercase(),
            choose(rng, VERBS),
            choose(rng, OBJECTS),
            choose(rng, CLAUSES)
        ),
    };
    format!("{body}.")
}

fn debate_sentence(rng: &mut SeededRng) -> String {
    let mut text = format!("{}, {}", choose(rng, OPENINGS), choose(rng, WISHES));
    for _ in 0..2 {
        let reason = choose(rng, REASONS);
        if !reason.is_empty() {
            text.push_str(", ");
            text.push_str(reason);
        }
    }
    text.push_str(if pick(rng, 8) == 0 { "!" } else { "." });
    text
}

/// `n` sentences, about five in eight from the legal corpus and the rest
/// from parliamentary debates.
pub fn desk_corpus(n: usize, seed: u64) -> Vec<CorpusRecord> {
    let mut rng = seeded(seed);
    (0..n)
        .map(|_| {
            if pick(&mut rng, 8) < 5 {
                CorpusRecord { source_corpus: "MARCELL-RO".into(), text: legal_sentence(&mut rng), error: None }
            } else {
                CorpusRecord { source_corpus: "Europarl".into(), text: debate_sentence(&mut rng), error: None }
            }
        })
        .collect()
}

pub fn write_corpus(path: &Path, records: &[CorpusRecord]) {
    write_jsonl(path, records).unwrap();
}

fn between<'a>(text: &'a str, start: &str, end: &str) -> Option<&'a str> {
    let from = text.find(start)? + start.len();
    let to = from + text[from..].find(end)?;
    Some(&text[from..to])
}

/// Deterministic stand-in for the model. Replies depend only on a hash of
/// the prompt: some say NO, some are malformed, the rest change one word
/// and list its index. A few list an index next to the changed word, so
/// the pipeline has to fall back to alignment tags.
pub struct SimulatedModel;

impl SimulatedModel {
    pub fn reply(prompt: &str) -> String {
        let two_shot = prompt.contains("will be turned into ANSWER");
        let sentence = if two_shot {
            between(prompt, "So, the sentence <<", ">> will be turned into ANSWER")
        } else {
            between(prompt, "in the following sentence: <<", ">>. Think")
        };
        let Some(sentence) = sentence else { return "Please provide a sentence.".into() };
        let hash = u64::from_str_radix(&stable_hash_hex(&[prompt.as_bytes()], 8), 16).unwrap();
        match hash % 100 {
            0..=6 => return "NO".into(),
            7..=9 => return "I could not find a suitable word.".into(),
            _ => {}
        }
        let tokens = tokenize(sentence);
        let words: Vec<usize> = tokens
            .tokens()
            .iter()
            .enumerate()
            .filter(|(_, t)| t.kind == TokenKind::Word && t.text.chars().count() >= 4)
            .map(|(i, _)| i)
            .collect();
        if words.is_empty() {
            return "NO".into();
        }
        let at = words[(hash / 100) as usize % words.len()];
        let mut texts: Vec<String> = tokens.texts().into_iter().map(String::from).collect();
        let word = texts[at].clone();
        let changed = if let Some(stem) = word.strip_suffix("ul") {
            stem.to_string()
        } else if let Some(stem) = word.strip_suffix('ă') {
            format!("{stem}e")
        } else {
            format!("{word}ă")
        };
        let variant = (hash / 10_000) % 4;
        let indices = match variant {
            1 => {
                texts.insert(at, "mai".into());
                vec![at, at + 1]
            }
            2 => {
                texts[at] = changed;
                vec![if at + 1 < texts.len() { at + 1 } else { at - 1 }]
            }
            _ => {
                texts[at] = changed;
                vec![at]
            }
        };
        let list = indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ");
        let text = detokenize(&texts);
        if two_shot {
            format!("ANSWER: \"{text}\"\n\nIndex: [{list}]")
        } else {
            format!("\"{text}\"\n\nIndex: [{list}]")
        }
    }
}

impl LlmClient for SimulatedModel {
    fn complete(&self, request: &LlmRequest) -> Result<LlmResponse, ClientError> {
        Ok(LlmResponse { text: SimulatedModel::reply(&request.prompt) })
    }
}

pub const ORDER_SENTENCE: &str = "Aprobată prin ORDINUL nr. 304 din 19 octombrie 2020, publicat în Monitorul Oficial al României, Partea I, nr. 1026 din 4 noiembrie 2020.";
pub const ORDER_REPLY: &str = "\"Aprobată prin ORDINUL nr. 304 din 19 octombrie 2020, publicat în Monitorul cel mai Oficial al României, Partea I, nr. 1026 din 4 noiembrie 2020.\"\n\nIndex: [14, 15, 16]";
pub const PROPOSAL_SENTENCE: &str = "La data de 19 februarie 2018, propunerea legislativă a fost prezentată în Biroul permanent al Camerei Deputaților și transmisă pentru raport și avize comisiilor de specialitate.";
/// The two-shot reply as printed with the prompt; it repeats the source.
pub const PROPOSAL_REPLY_AS_PRINTED: &str = "\"La data de 19 februarie 2018, propunerea legislativă a fost prezentată în Biroul permanent al Camerei Deputaților și transmisă pentru raport și avize comisiilor de specialitate.\"\n\nIndex: [11]";
/// The same exchange as recorded in the prompting comparison, with the
/// participle changed.
pub const PROPOSAL_REPLY: &str = "\"La data de 19 februarie 2018, propunerea legislativă a fost prezentat în Biroul permanent al Camerei Deputaților și transmisă pentru raport și avize comisiilor de specialitate.\"\n\nIndex: [11]";
