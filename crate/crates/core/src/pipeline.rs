use std::fmt;
use std::path::{Path, PathBuf};

use amlshacl_caex::parse_aml;
use amlshacl_llm::{
    build_interpretation_prompt, build_shape_prompt, complete, generate_turtle, merge_shape_graphs,
    InterpretationExample, LlmError, LlmExchange, ShapeExample,
};
use amlshacl_mapping::{iri_scheme_doc, map_document, ONTOLOGY_CONTEXT};
use amlshacl_rdf::{parse_turtle, serialize_turtle, Graph};
use amlshacl_shacl::{parse_shapes, report_table, report_to_graph, validate, ShapesGraph, ValidationReport};

use crate::config::{RunConfig, Stage};
use crate::parse_constraints;

pub const ONTOLOGY_TTL: &str = "ontology.ttl";
pub const SHAPES_TTL: &str = "shapes.ttl";
pub const REPORT_TTL: &str = "report.ttl";
pub const REPORT_TXT: &str = "report.txt";
pub const INTERPRETATION_MD: &str = "interpretation.md";
pub const EXCHANGES_LOG: &str = "exchanges.log";

pub const EXIT_CONFORMS: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// The bundled worked examples for shape generation.
pub fn shape_examples() -> Vec<ShapeExample> {
    vec![
        ShapeExample {
            constraint: include_str!("../assets/example1_constraint.txt").into(),
            shapes_turtle: include_str!("../assets/example1_shapes.ttl").into(),
        },
        ShapeExample {
            constraint: include_str!("../assets/example2_constraint.txt").into(),
            shapes_turtle: include_str!("../assets/example2_shapes.ttl").into(),
        },
    ]
}

/// The bundled one-shot example for report interpretation.
pub fn interpretation_example() -> InterpretationExample {
    InterpretationExample {
        report_turtle: include_str!("../assets/interpretation_example_report.ttl").into(),
        explanation: include_str!("../assets/interpretation_example.md").into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct PipelineError {
    pub stage: Stage,
    pub file: Option<PathBuf>,
    pub cause: String,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed", self.stage)?;
        if let Some(file) = &self.file {
            write!(f, " ({})", file.display())?;
        }
        write!(f, ": {}", self.cause)
    }
}

fn fail(stage: Stage, file: Option<&Path>, cause: impl ToString) -> PipelineError {
    PipelineError {
        stage,
        file: file.map(Path::to_path_buf),
        cause: cause.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Option<ValidationReport>,
    /// Warnings from mapping and shape compilation, in order of discovery.
    pub diagnostics: Vec<String>,
    /// Artifacts written, in order.
    pub written: Vec<PathBuf>,
}

pub fn exit_code(result: &Result<RunOutcome, PipelineError>) -> i32 {
    match result {
        Ok(o) => o.exit_code,
        Err(_) => EXIT_ERROR,
    }
}

struct Run<'a> {
    cfg: &'a RunConfig,
    outcome: RunOutcome,
    log: Vec<String>,
}

impl Run<'_> {
    fn write(&mut self, stage: Stage, name: &str, content: &str) -> Result<(), PipelineError> {
        let path = self.cfg.out_dir.join(name);
        std::fs::write(&path, content).map_err(|e| fail(stage, Some(&path), e))?;
        if !self.outcome.written.contains(&path) {
            self.outcome.written.push(path);
        }
        Ok(())
    }

    fn record(&mut self, stage: Stage, item: usize, ex: &LlmExchange) {
        self.record_calls(stage, item, &ex.calls);
    }

    fn record_calls(&mut self, stage: Stage, item: usize, calls: &[(String, String)]) {
        for (attempt, (hash, response)) in calls.iter().enumerate() {
            let line = serde_json::json!({
                "stage": stage.name(),
                "item": item,
                "attempt": attempt + 1,
                "prompt_hash": hash,
                "response": response,
            });
            self.log.push(line.to_string());
        }
    }

    fn flush_log(&mut self, stage: Stage) -> Result<(), PipelineError> {
        let mut text = self.log.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        self.write(stage, EXCHANGES_LOG, &text)
    }
}

fn read(stage: Stage, path: &Path) -> Result<Vec<u8>, PipelineError> {
    std::fs::read(path).map_err(|e| fail(stage, Some(path), e))
}

/// Run the enabled stages in order map, generate, validate, interpret.
///
/// Every artifact is written as soon as its stage finishes, so a failing
/// stage leaves the earlier artifacts in place.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, PipelineError> {
    let first = cfg.stages.iter().next().copied().unwrap_or(Stage::Map);
    cfg.check().map_err(|(stage, e)| fail(stage, None, e))?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| fail(first, Some(&cfg.out_dir), e))?;
    let mut run = Run {
        cfg,
        outcome: RunOutcome {
            exit_code: EXIT_CONFORMS,
            report: None,
            diagnostics: Vec::new(),
            written: Vec::new(),
        },
        log: Vec::new(),
    };

    let mut libraries_text = Vec::new();
    for ar in &cfg.ar_files {
        let bytes = read(first, ar)?;
        libraries_text.push(String::from_utf8_lossy(&bytes).into_owned());
    }

    let ontology = if cfg.runs(Stage::Map) {
        Some(map_stage(&mut run)?)
    } else {
        None
    };

    let shapes_graph = if cfg.runs(Stage::Generate) {
        let result = generate_stage(&mut run, &libraries_text);
        run.flush_log(Stage::Generate)?;
        Some(result?)
    } else if let Some(path) = &cfg.shapes_override {
        let stage = Stage::Validate;
        let text = String::from_utf8(read(stage, path)?).map_err(|e| fail(stage, Some(path), e))?;
        let g = parse_turtle(&text).map_err(|e| fail(stage, Some(path), e))?;
        run.write(stage, SHAPES_TTL, &serialize_turtle(&g, true))?;
        Some(g)
    } else {
        None
    };

    if cfg.runs(Stage::Validate) {
        let ontology = ontology.as_ref().expect("checked: validate needs map");
        let shapes_graph = shapes_graph.as_ref().expect("checked: validate needs shapes");
        let report = validate_stage(&mut run, ontology, shapes_graph)?;
        run.outcome.exit_code = if report.conforms {
            EXIT_CONFORMS
        } else {
            EXIT_VIOLATIONS
        };
        run.outcome.report = Some(report);
    }

    if cfg.runs(Stage::Interpret) {
        let result = interpret_stage(&mut run, &libraries_text);
        run.flush_log(Stage::Interpret)?;
        result?;
    }
    Ok(run.outcome)
}

fn map_stage(run: &mut Run) -> Result<Graph, PipelineError> {
    let cfg = run.cfg;
    let stage = Stage::Map;
    let name = |p: &Path| {
        p.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    let mut doc = parse_aml(&read(stage, &cfg.aml_file)?, &name(&cfg.aml_file))
        .map_err(|e| fail(stage, Some(&cfg.aml_file), e))?;
    for ar in &cfg.ar_files {
        let lib = parse_aml(&read(stage, ar)?, &name(ar)).map_err(|e| fail(stage, Some(ar), e))?;
        let skipped = doc.import_libraries(&lib).map_err(|e| fail(stage, Some(ar), e))?;
        for s in skipped {
            run.outcome.diagnostics.push(format!(
                "{}: library {s} already defined in the model; the model's copy is used",
                ar.display()
            ));
        }
    }
    let (graph, report) = map_document(&doc, &cfg.mapping);
    run.outcome
        .diagnostics
        .extend(report.warnings.iter().map(|w| format!("mapping: {w}")));
    run.write(stage, ONTOLOGY_TTL, &serialize_turtle(&graph, true))?;
    Ok(graph)
}

fn compile(turtle: &str) -> Result<(Graph, ShapesGraph), String> {
    let g = parse_turtle(turtle).map_err(|e| e.to_string())?;
    let shapes = parse_shapes(&g).map_err(|e| e.to_string())?;
    if shapes.is_empty() {
        return Err("the Turtle defines no shapes".into());
    }
    Ok((g, shapes))
}

fn generate_stage(run: &mut Run, libraries: &[String]) -> Result<Graph, PipelineError> {
    let cfg = run.cfg;
    let stage = Stage::Generate;
    let path = cfg
        .constraints_file
        .as_deref()
        .ok_or_else(|| fail(stage, None, "no constraints file given"))?;
    let text = String::from_utf8(read(stage, path)?).map_err(|e| fail(stage, Some(path), e))?;
    let constraints = parse_constraints(&text);
    if constraints.is_empty() {
        return Err(fail(stage, Some(path), LlmError::EmptyConstraints));
    }
    let iri_docs = iri_scheme_doc(&cfg.mapping);
    let examples = shape_examples();
    let mut bundles = Vec::new();
    for c in &constraints {
        let b = build_shape_prompt(
            ONTOLOGY_CONTEXT,
            libraries,
            &examples,
            std::slice::from_ref(c),
            &iri_docs,
        )
        .map_err(|e| fail(stage, Some(path), e))?;
        bundles.push(b);
    }

    // Independent constraints are sent concurrently; results are used in
    // constraint order.
    let results: Vec<Result<(Graph, LlmExchange), LlmError>> = std::thread::scope(|s| {
        let handles: Vec<_> = bundles
            .iter()
            .map(|b| s.spawn(move || generate_turtle(b, &cfg.llm, |t| compile(t).map(|(g, _)| g))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("generation thread panicked"))
            .collect()
    });
    let mut parts = Vec::new();
    let mut first_error = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((g, ex)) => {
                run.record(stage, i + 1, &ex);
                parts.push(g);
            }
            Err(e) => {
                if let LlmError::NoTurtleFound { calls, .. } = &e {
                    run.record_calls(stage, i + 1, calls);
                }
                first_error.get_or_insert_with(|| fail(stage, Some(path), format!("constraint {}: {e}", i + 1)));
            }
        }
    }
    if let Some(e) = first_error {
        return Err(e);
    }
    let merged = merge_shape_graphs(&parts);
    let turtle = serialize_turtle(&merged, true);
    run.write(stage, SHAPES_TTL, &turtle)?;
    compile(&turtle).map_err(|e| fail(stage, Some(path), format!("merged shapes: {e}")))?;
    Ok(merged)
}

fn validate_stage(run: &mut Run, ontology: &Graph, shapes_graph: &Graph) -> Result<ValidationReport, PipelineError> {
    let stage = Stage::Validate;
    let shapes = parse_shapes(shapes_graph).map_err(|e| fail(stage, run.cfg.shapes_override.as_deref(), e))?;
    run.outcome
        .diagnostics
        .extend(shapes.diagnostics.iter().map(|d| format!("shapes: {d}")));
    let report = validate(ontology, &shapes);

    let mut g = report_to_graph(&report);
    let mut prefixes = ontology.prefixes().clone();
    prefixes.extend(shapes_graph.prefixes().clone());
    for (p, ns) in &prefixes {
        g.set_prefix(p.clone(), ns.clone());
    }
    run.write(stage, REPORT_TTL, &serialize_turtle(&g, true))?;
    let mut table = report_table(&report, &prefixes);
    for d in &run.outcome.diagnostics {
        table.push_str(&format!("note: {d}\n"));
    }
    run.write(stage, REPORT_TXT, &table)?;
    Ok(report)
}

fn interpret_stage(run: &mut Run, libraries: &[String]) -> Result<(), PipelineError> {
    let stage = Stage::Interpret;
    let artifact = |name: &str| {
        let path = run.cfg.out_dir.join(name);
        std::fs::read_to_string(&path).map_err(|e| fail(stage, Some(&path), e))
    };
    let report = artifact(REPORT_TTL)?;
    let shapes = artifact(SHAPES_TTL)?;
    let ontology = artifact(ONTOLOGY_TTL)?;
    let bundle = build_interpretation_prompt(&report, &shapes, &ontology, libraries, &interpretation_example())
        .map_err(|e| fail(stage, None, e))?;
    let ex = complete(&bundle, &run.cfg.llm).map_err(|e| fail(stage, None, e))?;
    run.record(stage, 1, &ex);
    let mut text = ex.raw_response.trim_end().to_string();
    text.push('\n');
    run.write(stage, INTERPRETATION_MD, &text)
}
