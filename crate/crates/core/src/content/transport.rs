//! LLM transport interface and retry policy.

use crate::deck::model::{Stage, StageConfig};
use crate::error::TransportError;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};
use std::time::Duration;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self {
            role: "system".into(),
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: "user".into(),
            content: content.into(),
        }
    }
}

/// One completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub config: StageConfig,
    pub messages: Vec<ChatMessage>,
    /// Sampling seed forwarded to the model.
    pub seed: u64,
    /// Pipeline step within the stage (`topics`, `outline`, `elements`,
    /// `text`, `structural`, `summary`).
    pub step: String,
    /// Structured copy of the prompt inputs. Live transports ignore it;
    /// the offline provider answers from it instead of reading prose.
    pub context: serde_json::Value,
}

pub trait LlmTransport: Send + Sync {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError>;

    fn name(&self) -> &str;
}

/// Stage-level retries with exponential backoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub factor: f64,
}

impl RetryPolicy {
    /// 3 tries, 1 s base delay doubling each time.
    pub fn live() -> Self {
        Self {
            max_attempts: 3,
            base_delay: Duration::from_secs(1),
            factor: 2.0,
        }
    }

    pub fn offline() -> Self {
        Self {
            max_attempts: 3,
            base_delay: Duration::ZERO,
            factor: 2.0,
        }
    }

    /// Delay before attempt `attempt` (1-based; the first attempt has none).
    pub fn delay_before(&self, attempt: u32) -> Duration {
        if attempt <= 1 {
            return Duration::ZERO;
        }
        self.base_delay.mul_f64(self.factor.powi(attempt as i32 - 2))
    }
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self::offline()
    }
}

static NETWORK_GUARD: AtomicBool = AtomicBool::new(false);

/// Makes every later network attempt in this process panic.
pub fn install_network_guard() {
    NETWORK_GUARD.store(true, Ordering::SeqCst);
}

pub fn network_guard_installed() -> bool {
    NETWORK_GUARD.load(Ordering::SeqCst)
}

/// Called by every component right before it touches the network.
pub fn assert_network_allowed(what: &str) {
    if network_guard_installed() {
        panic!("network guard: attempted network access ({what}) in offline mode");
    }
}

/// Transport that aborts on any call.
#[derive(Debug, Default)]
pub struct GuardTransport;

impl LlmTransport for GuardTransport {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        panic!("network guard: transport called for stage {}", request.config.stage);
    }

    fn name(&self) -> &str {
        "guard"
    }
}

/// Returns canned payloads in order, repeating the last one. Useful for
/// exercising stage parsing against fixed model output.
#[derive(Debug)]
pub struct CannedTransport {
    responses: Vec<Result<String, TransportError>>,
    calls: AtomicU32,
}

impl CannedTransport {
    pub fn new(responses: Vec<Result<String, TransportError>>) -> Self {
        assert!(!responses.is_empty(), "canned transport needs a response");
        Self {
            responses,
            calls: AtomicU32::new(0),
        }
    }

    pub fn always(payload: impl Into<String>) -> Self {
        Self::new(vec![Ok(payload.into())])
    }

    pub fn failing() -> Self {
        Self::new(vec![Err(TransportError::Retryable("connection refused".into()))])
    }

    pub fn calls(&self) -> u32 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl LlmTransport for CannedTransport {
    fn send(&self, _request: &ChatRequest) -> Result<String, TransportError> {
        let n = self.calls.fetch_add(1, Ordering::SeqCst) as usize;
        self.responses[n.min(self.responses.len() - 1)].clone()
    }

    fn name(&self) -> &str {
        "canned"
    }
}

/// Wraps a transport and counts calls per stage.
pub struct CountingTransport<T> {
    pub inner: T,
    counts: [AtomicU32; 4],
}

impl<T: LlmTransport> CountingTransport<T> {
    pub fn new(inner: T) -> Self {
        Self {
            inner,
            counts: Default::default(),
        }
    }

    pub fn count(&self, stage: Stage) -> u32 {
        self.counts[stage as usize].load(Ordering::SeqCst)
    }

    pub fn total(&self) -> u32 {
        Stage::ALL.iter().map(|s| self.count(*s)).sum()
    }
}

impl<T: LlmTransport> LlmTransport for CountingTransport<T> {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        self.counts[request.config.stage as usize].fetch_add(1, Ordering::SeqCst);
        self.inner.send(request)
    }

    fn name(&self) -> &str {
        self.inner.name()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backoff_doubles_from_one_second() {
        let p = RetryPolicy::live();
        assert_eq!(p.delay_before(1), Duration::ZERO);
        assert_eq!(p.delay_before(2), Duration::from_secs(1));
        assert_eq!(p.delay_before(3), Duration::from_secs(2));
    }

    #[test]
    fn canned_repeats_last_response() {
        let t = CannedTransport::new(vec![Ok("a".into()), Ok("b".into())]);
        let req = ChatRequest {
            config: StageConfig::default_for(Stage::Topic),
            messages: vec![],
            seed: 0,
            step: "topics".into(),
            context: serde_json::Value::Null,
        };
        assert_eq!(t.send(&req).unwrap(), "a");
        assert_eq!(t.send(&req).unwrap(), "b");
        assert_eq!(t.send(&req).unwrap(), "b");
        assert_eq!(t.calls(), 3);
    }
}
