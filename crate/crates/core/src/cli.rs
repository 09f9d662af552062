//! Command-line interface of the `aml-shacl` binary.

use std::collections::BTreeSet;
use std::path::PathBuf;

use amlshacl_llm::LlmMode;
use clap::{Parser, Subcommand};

use crate::config::{FileConfig, RunConfig, Stage};

#[derive(Debug, Parser)]
#[command(
    name = "aml-shacl",
    version,
    about = "Validate AutomationML models against textual rules with SHACL"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map the model, obtain shapes, validate and interpret the report.
    Validate(ValidateArgs),
}

#[derive(Debug, clap::Args)]
pub struct ValidateArgs {
    /// The AML model to validate.
    #[arg(long)]
    pub aml: PathBuf,
    /// Application Recommendation library files (repeatable).
    #[arg(long = "ar", value_name = "FILE")]
    pub ar: Vec<PathBuf>,
    /// Rules in natural language, separated by blank lines.
    #[arg(long)]
    pub constraints: Option<PathBuf>,
    /// Directory for the artifacts.
    #[arg(long)]
    pub out: PathBuf,
    /// Validate with these shapes instead of generating them.
    #[arg(long)]
    pub shapes: Option<PathBuf>,
    /// Comma-separated stages to run. Defaults to all of them, or to
    /// map,validate when --shapes is given.
    #[arg(long, value_delimiter = ',')]
    pub stages: Vec<Stage>,
    /// Call the endpoint (live) or read recorded responses (replay).
    #[arg(long, value_name = "live|replay")]
    pub llm_mode: Option<LlmMode>,
    /// Model name sent to the endpoint.
    #[arg(long)]
    pub model: Option<String>,
    /// Chat completions URL of an OpenAI-compatible server.
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Directory of recorded LLM responses.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// TOML configuration file with [mapping] and [llm] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ValidateArgs {
    /// Combine the flags with the configuration file; flags win.
    pub fn to_run_config(&self) -> Result<RunConfig, String> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let mut cfg = RunConfig::new(&self.aml, &self.out);
        cfg.mapping = file.mapping_config()?;
        if let Some(llm) = file.llm {
            cfg.llm = llm;
        }
        cfg.ar_files = self.ar.clone();
        cfg.constraints_file = self.constraints.clone();
        cfg.shapes_override = self.shapes.clone();
        cfg.stages = if !self.stages.is_empty() {
            self.stages.iter().copied().collect()
        } else if self.shapes.is_some() {
            BTreeSet::from([Stage::Map, Stage::Validate])
        } else {
            Stage::ALL.into_iter().collect()
        };
        if let Some(m) = self.llm_mode {
            cfg.llm.mode = m;
        }
        if let Some(m) = &self.model {
            cfg.llm.model_name = m.clone();
        }
        if let Some(e) = &self.endpoint {
            cfg.llm.endpoint_url = e.clone();
        }
        if let Some(f) = &self.fixtures {
            cfg.llm.fixtures_dir = Some(f.clone());
        }
        Ok(cfg)
    }
}
