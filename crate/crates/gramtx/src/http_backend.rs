//! Translation backend speaking a minimal JSON protocol:
//! `POST {url}/translate` with `{"source", "target", "text"}`, answered by
//! `{"text"}`.

use std::time::Duration;

use gramtx_core::backend::{BackendError, TranslationRequest, Translator};
use serde::{Deserialize, Serialize};

use crate::config::BackendConfig;

#[derive(Debug, Serialize)]
struct RequestBody<'a> {
    source: &'a str,
    target: &'a str,
    text: &'a str,
}

#[derive(Debug, Deserialize)]
struct ResponseBody {
    text: String,
}

/// Blocking HTTP client. Transport failures and 5xx answers are retried up
/// to `retries` more times; 4xx answers and malformed bodies are not.
#[derive(Debug, Clone)]
pub struct HttpTranslator {
    endpoint: String,
    retries: u32,
    agent: ureq::Agent,
}

impl HttpTranslator {
    pub fn new(base_url: &str, timeout: Duration, retries: u32) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        HttpTranslator {
            endpoint: format!("{}/translate", base_url.trim_end_matches('/')),
            retries,
            agent,
        }
    }

    /// `None` when the configuration has no URL.
    pub fn from_config(cfg: &BackendConfig) -> Option<Self> {
        cfg.url
            .as_deref()
            .map(|u| HttpTranslator::new(u, cfg.timeout(), cfg.retries))
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn attempt(&self, body: &RequestBody<'_>) -> Result<String, (BackendError, bool)> {
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .send_json(body)
            .map_err(|e| (BackendError::Unavailable(e.to_string()), true))?;
        let status = resp.status().as_u16();
        if status != 200 {
            let detail = resp.body_mut().read_to_string().unwrap_or_default();
            return Err((BackendError::BadResponse { status, detail }, status >= 500));
        }
        let parsed: ResponseBody = resp.body_mut().read_json().map_err(|e| {
            (
                BackendError::BadResponse {
                    status,
                    detail: format!("malformed body: {e}"),
                },
                false,
            )
        })?;
        Ok(parsed.text)
    }
}

impl Translator for HttpTranslator {
    fn translate(&self, req: &TranslationRequest) -> Result<String, BackendError> {
        let body = RequestBody {
            source: req.source_locale().code(),
            target: req.target_locale().code(),
            text: req.tagged_text(),
        };
        let mut left = self.retries;
        loop {
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err((e, retryable)) => {
                    if !retryable || left == 0 {
                        return Err(e);
                    }
                    left -= 1;
                }
            }
        }
    }
}
