//! HTTP transports for chat completions and image search.

use super::search::{ImageCandidate, ImageKind, ImageSearchClient};
use super::transport::{assert_network_allowed, ChatRequest, LlmTransport};
use crate::error::{SearchError, TransportError};
use image::RgbaImage;
use serde_json::{json, Value};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

pub const API_KEY_ENV: &str = "SLIDEFORGE_LLM_API_KEY";
pub const SEARCH_KEY_ENV: &str = "SLIDEFORGE_SEARCH_API_KEY";
pub const MAX_IN_FLIGHT: usize = 4;

/// Counting semaphore bounding concurrent requests.
#[derive(Debug)]
pub struct Permits {
    free: Mutex<usize>,
    cv: Condvar,
}

pub struct Permit<'a>(&'a Permits);

impl Permits {
    pub fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n),
            cv: Condvar::new(),
        }
    }

    pub fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }

    pub fn available(&self) -> usize {
        *self.free.lock().unwrap_or_else(|e| e.into_inner())
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut free = self.0.free.lock().unwrap_or_else(|e| e.into_inner());
        *free += 1;
        self.0.cv.notify_one();
    }
}

fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .build()
        .into()
}

/// Chat-completions client against `{base_url}/chat/completions`.
pub struct LiveTransport {
    base_url: String,
    api_key: Option<String>,
    agent: ureq::Agent,
    permits: Permits,
}

impl LiveTransport {
    pub fn new(base_url: impl Into<String>, api_key: Option<String>) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            api_key,
            agent: agent(Duration::from_secs(120)),
            permits: Permits::new(MAX_IN_FLIGHT),
        }
    }

    /// Reads the key from `SLIDEFORGE_LLM_API_KEY`.
    pub fn from_env(base_url: impl Into<String>) -> Self {
        Self::new(base_url, std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()))
    }

    pub fn request_body(request: &ChatRequest) -> Value {
        json!({
            "model": request.config.model,
            "messages": request.messages,
            "temperature": request.config.temperature,
            "top_p": request.config.top_p,
            "max_tokens": request.config.max_tokens,
            "seed": request.seed,
        })
    }
}

fn classify_status(status: u16, body: &str) -> TransportError {
    let msg = format!("HTTP {status}: {}", body.chars().take(200).collect::<String>());
    if status == 429 || status >= 500 {
        TransportError::Retryable(msg)
    } else {
        TransportError::Fatal(msg)
    }
}

impl LlmTransport for LiveTransport {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        assert_network_allowed("chat completion");
        let _permit = self.permits.acquire();
        let url = format!("{}/chat/completions", self.base_url);
        let mut req = self.agent.post(&url);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(Self::request_body(request))
            .map_err(|e| TransportError::Retryable(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError::Retryable(e.to_string()))?;
        if status != 200 {
            return Err(classify_status(status, &text));
        }
        let v: Value = serde_json::from_str(&text).map_err(|e| TransportError::Retryable(format!("bad JSON: {e}")))?;
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| TransportError::Retryable("response has no choices[0].message.content".into()))
    }

    fn name(&self) -> &str {
        "live"
    }
}

/// Web image search returning `value[].contentUrl`, in the style of common
/// search APIs.
pub struct LiveSearchClient {
    endpoint: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl LiveSearchClient {
    pub fn new(endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            api_key,
            agent: agent(Duration::from_secs(30)),
        }
    }

    pub fn from_env(endpoint: impl Into<String>) -> Self {
        Self::new(endpoint, std::env::var(SEARCH_KEY_ENV).ok().filter(|k| !k.is_empty()))
    }
}

impl ImageSearchClient for LiveSearchClient {
    fn search(&self, query: &str, kind: ImageKind, k: usize) -> Result<Vec<ImageCandidate>, SearchError> {
        assert_network_allowed("image search");
        let q = match kind {
            ImageKind::Diagram => format!("{query} diagram"),
            ImageKind::Photo => query.to_string(),
        };
        let mut req = self.agent.get(&self.endpoint).query("q", &q).query("count", k.to_string());
        if let Some(key) = &self.api_key {
            req = req.header("Ocp-Apim-Subscription-Key", key);
        }
        let mut resp = req.call().map_err(|e| SearchError::Search(e.to_string()))?;
        if resp.status().as_u16() != 200 {
            return Err(SearchError::Search(format!("HTTP {}", resp.status().as_u16())));
        }
        let v: Value = resp.body_mut().read_json().map_err(|e| SearchError::Search(e.to_string()))?;
        let hits = v.get("value").and_then(Value::as_array).cloned().unwrap_or_default();
        Ok(hits
            .iter()
            .filter_map(|h| h.get("contentUrl").and_then(Value::as_str))
            .take(k)
            .map(|u| ImageCandidate { url: u.to_string(), kind })
            .collect())
    }

    fn fetch(&self, candidate: &ImageCandidate) -> Result<RgbaImage, SearchError> {
        assert_network_allowed("image download");
        let mut resp = self
            .agent
            .get(&candidate.url)
            .call()
            .map_err(|e| SearchError::Download(e.to_string()))?;
        if resp.status().as_u16() != 200 {
            return Err(SearchError::Download(format!("HTTP {}", resp.status().as_u16())));
        }
        let bytes = resp.body_mut().read_to_vec().map_err(|e| SearchError::Download(e.to_string()))?;
        image::load_from_memory(&bytes)
            .map(|img| img.to_rgba8())
            .map_err(|e| SearchError::Download(e.to_string()))
    }

    fn name(&self) -> &str {
        "live-search"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn permits_bound_concurrency() {
        let p = Arc::new(Permits::new(2));
        let a = p.acquire();
        let _b = p.acquire();
        assert_eq!(p.available(), 0);
        drop(a);
        assert_eq!(p.available(), 1);
    }

    #[test]
    fn status_classification() {
        assert!(matches!(classify_status(429, ""), TransportError::Retryable(_)));
        assert!(matches!(classify_status(503, ""), TransportError::Retryable(_)));
        assert!(matches!(classify_status(401, ""), TransportError::Fatal(_)));
    }
}
