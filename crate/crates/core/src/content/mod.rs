//! Content phase: LLM-driven topic, outline, element and payload
//! generation plus image retrieval.

pub mod context;
pub mod corpus;
pub mod live;
pub mod offline;
pub mod parser;
pub mod plan;
pub mod prompts;
pub mod search;
pub mod stages;
pub mod transport;

pub use offline::OfflineProvider;
pub use parser::{parse_llm_payload, ExpectedShape, ParsedPayload};
pub use plan::{BookSeed, ElementClass, ElementPlan, PlanRequest, SlidePlan};
pub use prompts::PromptSet;
pub use search::{retrieve_diagram, ImageSearchClient, StubSearchClient};
pub use stages::{
    assign_elements, generate_outline, generate_structural_payloads, generate_text_payloads, generate_topics, run_content_phase,
    ContentCtx, ContentOutput, ContentSource,
};
pub use transport::{install_network_guard, ChatRequest, LlmTransport, RetryPolicy};
