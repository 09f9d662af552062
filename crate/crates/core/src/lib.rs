//! Validation of AutomationML models against textual rules.
//!
//! The pipeline maps an AML/CAEX file (plus Application Recommendation
//! libraries) to RDF, obtains SHACL shapes for the rules from an LLM (or a
//! given shapes file), validates the model, and asks the LLM to explain the
//! report. See [`run`] and the `aml-shacl` binary.

pub mod cli;
pub mod config;
mod pipeline;

pub use config::{FileConfig, RunConfig, Stage};
pub use pipeline::{
    exit_code, interpretation_example, run, shape_examples, PipelineError, RunOutcome, EXCHANGES_LOG, EXIT_CONFORMS,
    EXIT_ERROR, EXIT_VIOLATIONS, INTERPRETATION_MD, ONTOLOGY_TTL, REPORT_TTL, REPORT_TXT, SHAPES_TTL,
};

/// Split a constraints file into constraints: blocks separated by blank
/// lines, `#` lines dropped, order kept.
pub fn parse_constraints(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut block: Vec<&str> = Vec::new();
    for line in text.lines() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        if line.trim().is_empty() {
            if !block.is_empty() {
                out.push(block.join("\n"));
                block.clear();
            }
        } else {
            block.push(line.trim_end());
        }
    }
    if !block.is_empty() {
        out.push(block.join("\n"));
    }
    out
}
