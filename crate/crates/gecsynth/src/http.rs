//! HTTP model client for the `{model_id, prompt, temperature}` -> `{text}`
//! wire contract.

use std::time::Duration;

use gecsynth_core::llm::{ClientError, LlmClient, LlmRequest, LlmResponse};

pub struct HttpClient {
    agent: ureq::Agent,
    endpoint: String,
    token: Option<String>,
    backoff: Duration,
}

impl HttpClient {
    /// Reads the bearer token from `token_env` if it is set.
    pub fn new(endpoint: impl Into<String>, token_env: &str) -> Self {
        let config = ureq::Agent::config_builder().timeout_global(Some(Duration::from_secs(120))).build();
        HttpClient {
            agent: config.into(),
            endpoint: endpoint.into(),
            token: std::env::var(token_env).ok().filter(|t| !t.is_empty()),
            backoff: Duration::from_secs(1),
        }
    }

    /// Base delay before the first retry; it doubles on each further retry.
    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    pub fn retry_delay(&self, attempt: u32) -> Duration {
        self.backoff.saturating_mul(1 << attempt.saturating_sub(1).min(16))
    }
}

impl LlmClient for HttpClient {
    fn complete(&self, request: &LlmRequest) -> Result<LlmResponse, ClientError> {
        let mut call = self.agent.post(&self.endpoint);
        if let Some(token) = &self.token {
            call = call.header("Authorization", &format!("Bearer {token}"));
        }
        let mut response = call.send_json(request).map_err(|e| ClientError(format!("{}: {e}", self.endpoint)))?;
        response
            .body_mut()
            .read_json::<LlmResponse>()
            .map_err(|e| ClientError(format!("{}: bad response body: {e}", self.endpoint)))
    }

    fn before_retry(&self, attempt: u32) {
        let delay = self.retry_delay(attempt);
        log::warn!("model request failed, retry {attempt} in {delay:?}");
        std::thread::sleep(delay);
    }
}
