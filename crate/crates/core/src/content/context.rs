//! Structured request contexts, sent alongside each prompt.

use super::plan::{ElementClass, PlanRequest};
use serde::{Deserialize, Serialize};

pub const STEP_TOPICS: &str = "topics";
pub const STEP_OUTLINE: &str = "outline";
pub const STEP_ELEMENTS: &str = "elements";
pub const STEP_TEXT: &str = "text";
pub const STEP_STRUCTURAL: &str = "structural";
pub const STEP_SUMMARY: &str = "summary";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicContext {
    pub subject: String,
    pub book: String,
    pub author: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlineContext {
    pub topic: String,
    pub book: String,
    pub max_slides: usize,
    pub max_words: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementsContext {
    pub topic: String,
    pub titles: Vec<String>,
    pub max_elements: usize,
    /// Classes to favour (scarce-class oversampling).
    #[serde(default)]
    pub emphasis: Vec<ElementClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayloadContext {
    pub topic: String,
    pub subject: String,
    pub requests: Vec<PlanRequest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryContext {
    pub slide: String,
    /// Deterministic template summary, used by the offline provider.
    pub fallback: String,
}
