//! LLM side of the pipeline: prompt assembly for shape generation and
//! report interpretation, an OpenAI-compatible chat-completion client with
//! recorded-fixture replay, and post-processing of model output.

mod client;
mod extract;
mod prompt;

use amlshacl_rdf::Graph;

pub use client::{
    bundle_messages, complete, complete_messages, generate_turtle, prompt_hash, ChatMessage, LlmClientConfig,
    LlmExchange, LlmMode, CORRECTIVE_INSTRUCTION,
};
pub use extract::extract_turtle;
pub use prompt::{
    build_interpretation_prompt, build_shape_prompt, InterpretationExample, PromptBundle, Section, SectionLabel,
    ShapeExample,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LlmError {
    #[error("no constraints given")]
    EmptyConstraints,
    #[error("validation report is not valid Turtle: {0}")]
    BadReport(String),
    #[error("LLM configuration: {0}")]
    Config(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("HTTP status {code}: {body}")]
    HttpStatus { code: u16, body: String },
    #[error("request timed out")]
    Timeout,
    #[error("unexpected response body: {0}")]
    BadResponse(String),
    #[error("no recorded response for prompt hash {0}")]
    MissingFixture(String),
    #[error("no usable Turtle after {attempts} attempt(s): {reason}")]
    NoTurtleFound {
        attempts: u32,
        reason: String,
        /// (prompt hash, raw response) per call, in order.
        calls: Vec<(String, String)>,
    },
    #[error("fixture I/O: {0}")]
    Io(String),
}

/// Union of per-constraint shape graphs. Blank nodes are renamed where
/// labels collide; later prefix bindings win.
pub fn merge_shape_graphs(parts: &[Graph]) -> Graph {
    let mut out = Graph::new();
    for p in parts {
        out.merge(p);
    }
    out
}
