//! Recorded model exchanges: a JSONL file of requests with their replies,
//! replayed through [`FixtureClient`].

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Mutex;

use anyhow::Result;
use gecsynth_core::llm::{request_key, ClientError, FixtureClient, LlmClient, LlmRequest, LlmResponse};
use serde::{Deserialize, Serialize};

use crate::files::{read_jsonl, write_jsonl};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub model_id: String,
    pub prompt: String,
    pub temperature: f64,
    pub text: String,
}

impl FixtureRecord {
    pub fn new(request: &LlmRequest, text: impl Into<String>) -> Self {
        FixtureRecord {
            model_id: request.model_id.clone(),
            prompt: request.prompt.clone(),
            temperature: request.temperature,
            text: text.into(),
        }
    }

    pub fn request(&self) -> LlmRequest {
        LlmRequest { model_id: self.model_id.clone(), prompt: self.prompt.clone(), temperature: self.temperature }
    }
}

pub fn load_fixture(path: &Path) -> Result<FixtureClient> {
    let mut client = FixtureClient::new();
    for record in read_jsonl::<FixtureRecord>(path)? {
        client.insert(&record.request(), record.text);
    }
    Ok(client)
}

/// Passes requests through to `inner` and keeps every successful exchange,
/// so that a live run can be replayed offline.
pub struct RecordingClient<C> {
    inner: C,
    records: Mutex<BTreeMap<String, FixtureRecord>>,
}

impl<C: LlmClient> RecordingClient<C> {
    pub fn new(inner: C) -> Self {
        RecordingClient { inner, records: Mutex::new(BTreeMap::new()) }
    }

    /// Exchanges ordered by request key.
    pub fn records(&self) -> Vec<FixtureRecord> {
        self.records.lock().expect("recorder lock").values().cloned().collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_jsonl(path, &self.records())
    }
}

impl<C: LlmClient> LlmClient for RecordingClient<C> {
    fn complete(&self, request: &LlmRequest) -> Result<LlmResponse, ClientError> {
        let response = self.inner.complete(request)?;
        self.records
            .lock()
            .expect("recorder lock")
            .insert(request_key(request), FixtureRecord::new(request, response.text.clone()));
        Ok(response)
    }

    fn before_retry(&self, attempt: u32) {
        self.inner.before_retry(attempt)
    }
}
