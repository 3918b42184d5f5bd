use alloc::collections::BTreeMap;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::rng::stable_hash_hex;

/// Wire request: `{model_id, prompt, temperature}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmRequest {
    pub model_id: String,
    pub prompt: String,
    pub temperature: f64,
}

/// Wire response: `{text}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmResponse {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("LLM client error: {0}")]
pub struct ClientError(pub String);

/// Stable SHA-256 key of a request, used to look up recorded responses.
pub fn request_key(request: &LlmRequest) -> String {
    stable_hash_hex(
        &[request.model_id.as_bytes(), request.prompt.as_bytes(), &request.temperature.to_bits().to_le_bytes()],
        32,
    )
}

/// A text-completion backend.
pub trait LlmClient {
    fn complete(&self, request: &LlmRequest) -> Result<LlmResponse, ClientError>;

    /// Hook called before retry number `attempt` (1-based). Network clients
    /// sleep here; the default does nothing.
    fn before_retry(&self, _attempt: u32) {}
}

impl<C: LlmClient + ?Sized> LlmClient for &C {
    fn complete(&self, request: &LlmRequest) -> Result<LlmResponse, ClientError> {
        (**self).complete(request)
    }

    fn before_retry(&self, attempt: u32) {
        (**self).before_retry(attempt)
    }
}

/// Replays canned responses keyed by [`request_key`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixtureClient {
    responses: BTreeMap<String, String>,
}

impl FixtureClient {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, request: &LlmRequest, text: impl Into<String>) {
        self.responses.insert(request_key(request), text.into());
    }

    pub fn insert_key(&mut self, key: String, text: String) {
        self.responses.insert(key, text);
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }
}

impl LlmClient for FixtureClient {
    fn complete(&self, request: &LlmRequest) -> Result<LlmResponse, ClientError> {
        let key = request_key(request);
        self.responses
            .get(&key)
            .map(|text| LlmResponse { text: text.clone() })
            .ok_or_else(|| ClientError(alloc::format!("no recorded response for request {key}")))
    }
}
