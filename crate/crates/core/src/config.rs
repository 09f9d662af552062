use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use amlshacl_llm::LlmClientConfig;
use amlshacl_mapping::{LibNamespacePolicy, MappingConfig};
use amlshacl_rdf::Iri;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Map,
    Generate,
    Validate,
    Interpret,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Map, Stage::Generate, Stage::Validate, Stage::Interpret];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Map => "map",
            Stage::Generate => "generate",
            Stage::Validate => "validate",
            Stage::Interpret => "interpret",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| format!("unknown stage {s:?} (expected map, generate, validate or interpret)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub aml_file: PathBuf,
    pub ar_files: Vec<PathBuf>,
    pub constraints_file: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub mapping: MappingConfig,
    pub llm: LlmClientConfig,
    pub stages: BTreeSet<Stage>,
    /// Use these shapes instead of generating them.
    pub shapes_override: Option<PathBuf>,
}

impl RunConfig {
    /// All stages, default mapping and LLM settings.
    pub fn new(aml_file: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            aml_file: aml_file.into(),
            ar_files: Vec::new(),
            constraints_file: None,
            out_dir: out_dir.into(),
            mapping: MappingConfig::default(),
            llm: LlmClientConfig::default(),
            stages: Stage::ALL.into_iter().collect(),
            shapes_override: None,
        }
    }

    pub fn runs(&self, stage: Stage) -> bool {
        self.stages.contains(&stage)
    }

    /// Stage dependencies: validate needs the mapped model and shapes
    /// (generated or given); interpret needs validate. The error names the
    /// stage whose requirement is not met.
    pub fn check(&self) -> Result<(), (Stage, String)> {
        if self.runs(Stage::Validate) {
            if !self.runs(Stage::Map) {
                return Err((Stage::Validate, "the validate stage needs the map stage".into()));
            }
            if !self.runs(Stage::Generate) && self.shapes_override.is_none() {
                return Err((
                    Stage::Validate,
                    "the validate stage needs the generate stage or --shapes".into(),
                ));
            }
        }
        if self.runs(Stage::Interpret) && !self.runs(Stage::Validate) {
            return Err((Stage::Interpret, "the interpret stage needs the validate stage".into()));
        }
        if self.runs(Stage::Generate) && self.shapes_override.is_some() {
            return Err((
                Stage::Generate,
                "--shapes replaces the generate stage; do not request both".into(),
            ));
        }
        for stage in [Stage::Generate, Stage::Interpret] {
            if self.runs(stage) {
                self.llm.validate().map_err(|e| (stage, e.to_string()))?;
                break;
            }
        }
        self.mapping.validate().map_err(|e| (Stage::Map, e.to_string()))
    }
}

/// Contents of a TOML configuration file. Relative paths inside it resolve
/// against the file's directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub mapping: MappingSection,
    pub llm: Option<LlmClientConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MappingSection {
    pub base_iri: Option<String>,
    pub aml_namespace: Option<String>,
    pub lib_namespace: Option<String>,
    /// `path` or `id`.
    pub lib_namespace_policy: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: FileConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if let Some(dir) = cfg.llm.as_mut().and_then(|l| l.fixtures_dir.as_mut()) {
            if dir.is_relative() {
                *dir = path.parent().unwrap_or(Path::new(".")).join(&*dir);
            }
        }
        Ok(cfg)
    }

    pub fn mapping_config(&self) -> Result<MappingConfig, String> {
        let mut m = MappingConfig::default();
        let iri = |s: &String| Iri::new(s.clone()).map_err(|e| format!("{s}: {e}"));
        if let Some(s) = &self.mapping.base_iri {
            m.base_iri = iri(s)?;
        }
        if let Some(s) = &self.mapping.aml_namespace {
            m.aml_namespace = iri(s)?;
        }
        if let Some(s) = &self.mapping.lib_namespace {
            m.lib_namespace = iri(s)?;
        }
        m.lib_namespace_policy = match self.mapping.lib_namespace_policy.as_deref() {
            None | Some("path") => LibNamespacePolicy::Path,
            Some("id") => LibNamespacePolicy::Id,
            Some(other) => return Err(format!("unknown lib_namespace_policy {other:?}")),
        };
        Ok(m)
    }
}
