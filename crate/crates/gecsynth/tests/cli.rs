mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::sync::{Arc, Mutex};

use gecsynth::files::{read_ces, read_examples, write_jsonl, CorpusRecord};
use gecsynth_core::dataset::ParallelExample;
use gecsynth_core::llm::{CesEntry, LlmRequest, Origin};
use gecsynth_core::ErrorType;
use tempfile::TempDir;

use common::*;

fn gecsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gecsynth")).args(args).env("RUST_LOG", "error").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = gecsynth(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = gecsynth(args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn pinned(text: &str, error: ErrorType) -> CorpusRecord {
    CorpusRecord { source_corpus: "MARCELL-RO".into(), text: text.into(), error: Some(error) }
}

#[test]
fn offline_corrupt_of_plain_text() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("legal.txt");
    std::fs::write(
        &input,
        "Comisia a aprobat raportul anual.\nSenatul a respins proiectul de lege, iar Guvernul a tăcut.\n",
    )
    .unwrap();
    let output = dir.path().join("out.jsonl");
    // noise and confusion only, so no model is needed
    let stdout =
        ok(&["corrupt", "--input", p(&input), "--output", p(&output), "--set", "shares={SPELL=0.5, PREP=0.5}"]);
    assert!(stdout.contains("wrote 2 examples"), "{stdout}");
    let examples = read_examples(&output).unwrap();
    assert_eq!(examples.len(), 2);
    assert!(examples.iter().all(|e| e.source_corpus == "legal"));
    for example in &examples {
        example.check_invariants().unwrap();
    }
    ok(&["validate", "--input", p(&output)]);
}

#[test]
fn llm_errors_without_a_model_are_refused() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("corpus.jsonl");
    write_jsonl(&input, &[pinned("Comisia a aprobat raportul anual.", ErrorType::Adj)]).unwrap();
    let err = fails(&["corrupt", "--input", p(&input), "--output", p(&dir.path().join("o.jsonl"))]);
    assert!(err.contains("LLM"), "{err}");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("gecsynth.toml");
    std::fs::write(&config, "[noise]\nword_mu = [0.1875, 0.05, 0.0625, 0.7]\ncolour = 1\n").unwrap();
    let input = dir.path().join("in.txt");
    std::fs::write(&input, "Ceva.\n").unwrap();
    let err =
        fails(&["corrupt", "--input", p(&input), "--output", p(&dir.path().join("o.jsonl")), "--config", p(&config)]);
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn validate_reports_bad_examples() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.jsonl");
    let example = ParallelExample {
        id: "a".into(),
        source_corpus: "MARCELL-RO".into(),
        correct: gecsynth_core::text::tokenize("Au mai rămas 15 minute."),
        erroneous: gecsynth_core::text::tokenize("Au mai rămas 15 minute."),
        tags: "O O SPELL O O O".parse().unwrap(),
        injected: vec![ErrorType::Spell],
        seed: 1,
    };
    write_jsonl(&path, &[example]).unwrap();
    let out = gecsynth(&["validate", "--input", p(&path)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("marks no edit"));
}

#[test]
fn score_ged_and_gec_files() {
    let dir = TempDir::new().unwrap();
    let pred = dir.path().join("pred.txt");
    let gold = dir.path().join("gold.txt");
    std::fs::write(&pred, "O PUNCT O\nWO WO O O\n").unwrap();
    std::fs::write(&gold, "O PUNCT O\nWO WO SPELL SPELL\n").unwrap();
    let json = dir.path().join("ged.json");
    let table = ok(&["score-ged", "--pred", p(&pred), "--gold", p(&gold), "--json", p(&json)]);
    assert!(table.contains("PUNCT") && table.contains("beam"), "{table}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["aggregate"]["counts"]["tp"], 3);
    assert_eq!(report["aggregate"]["counts"]["fn"], 2);
    assert_eq!(report["decoding"]["beam_size"], 5);

    std::fs::write(&gold, "O PUNCT O\n").unwrap();
    assert!(fails(&["score-ged", "--pred", p(&pred), "--gold", p(&gold)]).contains("1"));

    let (src, hyp, reference) = (dir.path().join("src"), dir.path().join("hyp"), dir.path().join("ref"));
    std::fs::write(&src, "Eu am nu mai zece ani .\nAm mers ieri la dcotor .\n").unwrap();
    std::fs::write(&hyp, "Eu am numai zece ani .\nAm mers ieri la dcotor .\n").unwrap();
    std::fs::write(&reference, "Eu am numai zece ani .\nAm mers ieri la doctor .\n").unwrap();
    let json = dir.path().join("gec.json");
    ok(&["score-gec", "--src", p(&src), "--hyp", p(&hyp), "--ref", p(&reference), "--json", p(&json)]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(
        (report["matched"].as_u64(), report["predicted"].as_u64(), report["gold"].as_u64()),
        (Some(1), Some(1), Some(2))
    );
    assert_eq!(report["metrics"]["precision"], 1.0);
    assert_eq!(report["metrics"]["recall"], 0.5);
}

#[test]
fn score_ged_reads_dataset_files() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("c.jsonl");
    write_corpus(&input, &desk_corpus(30, 1));
    let data = dir.path().join("d.jsonl");
    ok(&["corrupt", "--input", p(&input), "--output", p(&data), "--set", "shares={WO=1.0}"]);
    let json = dir.path().join("ged.json");
    ok(&["score-ged", "--pred", p(&data), "--gold", p(&data), "--json", p(&json)]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["aggregate"]["metrics"]["f_half"], 1.0);
}

#[test]
fn split_and_stats() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("c.jsonl");
    write_corpus(&input, &desk_corpus(200, 2));
    let data = dir.path().join("d.jsonl");
    ok(&["corrupt", "--input", p(&input), "--output", p(&data), "--set", "shares={SPELL=0.6, PUNCT=0.4}"]);
    let (train, test) = (dir.path().join("train.jsonl"), dir.path().join("test.jsonl"));
    let out =
        ok(&["split", "--input", p(&data), "--train-out", p(&train), "--test-out", p(&test), "--fraction", "0.75"]);
    assert_eq!(out.trim(), "train 150 / test 50");
    let err = fails(&[
        "split",
        "--input",
        p(&data),
        "--train-out",
        p(&train),
        "--test-out",
        p(&test),
        "--test-corpus",
        "Nowhere",
    ]);
    assert!(err.contains("short by 20"), "{err}");

    let json = dir.path().join("stats.json");
    let table = ok(&["stats", "--input", p(&data), "--json", p(&json)]);
    assert!(table.contains("MARCELL-RO") && table.contains("Europarl"), "{table}");
    let stats: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(stats["total"]["sentence_count"], 200);
}

#[test]
fn enrich_and_review_ces() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.txt");
    let text: String = desk_corpus(60, 3).iter().map(|r| format!("{}\n", r.text)).collect();
    std::fs::write(&corpus, text).unwrap();
    let ces = dir.path().join("adv.json");

    let err = fails(&["enrich-ces", "--error", "ADV", "--corpus", p(&corpus), "--ces", p(&ces), "--auto-accept"]);
    assert!(err.contains("--llm-fixture"), "{err}");
    let err = fails(&[
        "enrich-ces",
        "--error",
        "SPELL",
        "--corpus",
        p(&corpus),
        "--ces",
        p(&ces),
        "--llm-fixture",
        p(&corpus),
    ]);
    assert!(!err.is_empty());

    // an empty fixture: every request fails, nothing is added
    let fixture = dir.path().join("empty.jsonl");
    std::fs::write(&fixture, "").unwrap();
    let out = ok(&[
        "enrich-ces",
        "--error",
        "ADV",
        "--corpus",
        p(&corpus),
        "--ces",
        p(&ces),
        "--auto-accept",
        "--llm-fixture",
        p(&fixture),
    ]);
    assert!(out.starts_with("ADV: 2 entries"), "{out}");

    // review keeps seed entries and asks about generated ones
    let mut set = read_ces(&ces, ErrorType::Adv).unwrap();
    let extra = CesEntry::new(
        "Am mâncat decât migdale azi.",
        "Am mâncat doar migdale azi.",
        Origin::LlmGenerated,
        ErrorType::Adv,
    )
    .unwrap();
    set.entries.push(extra);
    gecsynth::files::write_ces(&ces, &set).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_gecsynth"))
        .args(["review", "--ces", p(&ces), "--error", "ADV"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"maybe\nn\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("please answer y or n"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("kept 2 entries, removed 1"));
    assert_eq!(read_ces(&ces, ErrorType::Adv).unwrap().len(), 2);
}

/// Minimal HTTP/1.1 endpoint answering with the simulated model. Keeps the
/// authorization header of every request.
fn serve(listener: TcpListener, seen: Arc<Mutex<Vec<String>>>) {
    for stream in listener.incoming() {
        let Ok(stream) = stream else { return };
        let seen = Arc::clone(&seen);
        std::thread::spawn(move || {
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut writer = stream;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 {
                    return;
                }
                let mut length = 0;
                let mut auth = String::new();
                loop {
                    let mut header = String::new();
                    reader.read_line(&mut header).unwrap();
                    let header = header.trim_end();
                    if header.is_empty() {
                        break;
                    }
                    let (name, value) = header.split_once(':').unwrap();
                    match name.to_ascii_lowercase().as_str() {
                        "content-length" => length = value.trim().parse().unwrap(),
                        "authorization" => auth = value.trim().to_string(),
                        _ => {}
                    }
                }
                let mut body = vec![0; length];
                reader.read_exact(&mut body).unwrap();
                let request: LlmRequest = serde_json::from_slice(&body).unwrap();
                seen.lock().unwrap().push(auth);
                let mut text = SimulatedModel::reply(&request.prompt);
                if !text.contains("Index:") {
                    text = "NO".into();
                }
                let reply = serde_json::json!({ "text": text }).to_string();
                write!(
                    writer,
                    "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{reply}",
                    reply.len()
                )
                .unwrap();
            }
        });
    }
}

#[test]
fn http_exchanges_are_recorded_and_replayed() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let endpoint = format!("http://{}/complete", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    std::thread::spawn({
        let seen = Arc::clone(&seen);
        move || serve(listener, seen)
    });

    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let records: Vec<CorpusRecord> = desk_corpus(12, 4)
        .into_iter()
        .zip([ErrorType::AdjForm, ErrorType::Morph, ErrorType::NounPoss, ErrorType::VerbSva].into_iter().cycle())
        .map(|(mut r, e)| {
            r.error = Some(e);
            r
        })
        .collect();
    write_jsonl(&corpus, &records).unwrap();
    let (live, replay, fixture) =
        (dir.path().join("live.jsonl"), dir.path().join("replay.jsonl"), dir.path().join("f.jsonl"));

    let out = Command::new(env!("CARGO_BIN_EXE_gecsynth"))
        .args(["corrupt", "--input", p(&corpus), "--output", p(&live), "--seed", "2"])
        .args(["--llm-endpoint", &endpoint, "--record-fixture", p(&fixture)])
        .env("GECSYNTH_API_TOKEN", "secret")
        .env("RUST_LOG", "error")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let seen = seen.lock().unwrap().clone();
    assert_eq!(seen.len(), 12);
    assert!(seen.iter().all(|a| a == "Bearer secret"), "{seen:?}");

    ok(&["corrupt", "--input", p(&corpus), "--output", p(&replay), "--seed", "2", "--llm-fixture", p(&fixture)]);
    assert_eq!(std::fs::read(&live).unwrap(), std::fs::read(&replay).unwrap());
    let examples = read_examples(&replay).unwrap();
    let model_made = examples.iter().filter(|e| e.injected.iter().any(|t| t.default_method().is_llm())).count();
    assert!(model_made > 0);

    // the fixture only knows seed 2's prompts; another seed reorders the
    // two-shot examples and falls back to noise for those sentences
    let other = dir.path().join("other.jsonl");
    ok(&["corrupt", "--input", p(&corpus), "--output", p(&other), "--seed", "3", "--llm-fixture", p(&fixture)]);
    assert_eq!(read_examples(&other).unwrap().len(), 12);
}
