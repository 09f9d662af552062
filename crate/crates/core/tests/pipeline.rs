use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use amlshacl::{
    exit_code, run, RunConfig, Stage, EXCHANGES_LOG, EXIT_CONFORMS, EXIT_ERROR, EXIT_VIOLATIONS, INTERPRETATION_MD,
    ONTOLOGY_TTL, REPORT_TTL, REPORT_TXT, SHAPES_TTL,
};
use amlshacl_llm::LlmClientConfig;
use amlshacl_rdf::parse_turtle;
use amlshacl_shacl::report_from_graph;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn with_reference_shapes(model: &str, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(fixture(model), out);
    cfg.ar_files = vec![fixture("ar_apc_library.aml")];
    cfg.shapes_override = Some(fixture("reference_shapes.ttl"));
    cfg.stages = BTreeSet::from([Stage::Map, Stage::Validate]);
    cfg
}

fn replay(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(fixture("apc_violating.aml"), out);
    cfg.ar_files = vec![fixture("ar_apc_library.aml")];
    cfg.constraints_file = Some(fixture("apc_rules.txt"));
    cfg.llm = LlmClientConfig {
        fixtures_dir: Some(fixture("llm")),
        ..LlmClientConfig::default()
    };
    cfg
}

#[test]
fn violating_model_with_reference_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&with_reference_shapes("apc_violating.aml", dir.path())).unwrap();
    assert_eq!(outcome.exit_code, EXIT_VIOLATIONS);
    let report = outcome.report.unwrap();
    assert_eq!(report.results.len(), 3);

    // report.ttl carries the same report.
    let g = parse_turtle(&std::fs::read_to_string(dir.path().join(REPORT_TTL)).unwrap()).unwrap();
    assert_eq!(report_from_graph(&g).unwrap(), report);
    let table = std::fs::read_to_string(dir.path().join(REPORT_TXT)).unwrap();
    assert!(table.starts_with("conforms: false  violations: 3"));
    assert!(!dir.path().join(INTERPRETATION_MD).exists());
}

#[test]
fn corrected_model_conforms() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&with_reference_shapes("apc_corrected.aml", dir.path())).unwrap();
    assert_eq!(outcome.exit_code, EXIT_CONFORMS);
    assert!(outcome.report.unwrap().results.is_empty());
}

#[test]
fn missing_constraints_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = replay(dir.path());
    cfg.constraints_file = Some(dir.path().join("nope.txt"));
    let result = run(&cfg);
    assert_eq!(exit_code(&result), EXIT_ERROR);
    let err = result.unwrap_err();
    assert_eq!(err.stage, Stage::Generate);
    assert!(err.to_string().contains("nope.txt"), "{err}");
    // The map stage finished before the failure and its artifact stays.
    assert!(dir.path().join(ONTOLOGY_TTL).exists());
    assert!(!dir.path().join(REPORT_TTL).exists());
}

#[test]
fn replay_run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&replay(dir.path())).unwrap();
    assert_eq!(outcome.exit_code, EXIT_VIOLATIONS);
    assert_eq!(outcome.report.as_ref().unwrap().results.len(), 3);
    for name in [
        ONTOLOGY_TTL,
        SHAPES_TTL,
        REPORT_TTL,
        REPORT_TXT,
        INTERPRETATION_MD,
        EXCHANGES_LOG,
    ] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let log = std::fs::read_to_string(dir.path().join(EXCHANGES_LOG)).unwrap();
    let lines: Vec<serde_json::Value> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // Three rules, one of them retried once, plus the interpretation.
    assert_eq!(lines.len(), 5);
    assert_eq!(lines.iter().filter(|l| l["stage"] == "generate").count(), 4);
    assert_eq!(lines.last().unwrap()["stage"], "interpret");
    let md = std::fs::read_to_string(dir.path().join(INTERPRETATION_MD)).unwrap();
    assert!(md.contains("ExampleSubnet"));
}

#[test]
fn corrupted_constraint_fails_generation() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = replay(dir.path());
    cfg.constraints_file = Some(fixture("corrupted_rule.txt"));
    let err = run(&cfg).unwrap_err();
    assert_eq!(err.stage, Stage::Generate);
    assert!(err.cause.contains("no usable Turtle after 3 attempt(s)"), "{err}");
    // The failed chain is still logged, one line per call.
    let log = std::fs::read_to_string(dir.path().join(EXCHANGES_LOG)).unwrap();
    assert_eq!(log.lines().count(), 3);
}

#[test]
fn skipped_stages_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = replay(dir.path());
    cfg.stages = BTreeSet::from([Stage::Map]);
    let outcome = run(&cfg).unwrap();
    assert_eq!(outcome.written, vec![dir.path().join(ONTOLOGY_TTL)]);
    assert!(outcome.report.is_none());
    assert_eq!(outcome.exit_code, EXIT_CONFORMS);
}

#[test]
fn inconsistent_stages_are_rejected_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut cfg = replay(&out);
    cfg.stages = BTreeSet::from([Stage::Map, Stage::Interpret]);
    assert!(run(&cfg).is_err());
    assert!(!out.exists());
}

#[test]
fn mapped_ontology_matches_across_entry_points() {
    // The generate-from-replay run and the --shapes run map the model the same way.
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(&replay(a.path())).unwrap();
    run(&with_reference_shapes("apc_violating.aml", b.path())).unwrap();
    let read = |d: &Path| std::fs::read(d.join(ONTOLOGY_TTL)).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_aml-shacl"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let ar = fixture("ar_apc_library.aml");
    let shapes = fixture("reference_shapes.ttl");
    let model = |name: &str| fixture(name).to_str().unwrap().to_string();
    let common = |m: &str| {
        vec![
            "validate".to_string(),
            "--aml".into(),
            model(m),
            "--ar".into(),
            ar.to_str().unwrap().into(),
            "--shapes".into(),
            shapes.to_str().unwrap().into(),
            "--out".into(),
            out.into(),
        ]
    };
    let run_bin = |v: Vec<String>| binary(&v.iter().map(String::as_str).collect::<Vec<_>>());

    let o = run_bin(common("apc_violating.aml"));
    assert_eq!(o.status.code(), Some(EXIT_VIOLATIONS));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("conforms: false  violations: 3"));

    let o = run_bin(common("apc_corrected.aml"));
    assert_eq!(o.status.code(), Some(EXIT_CONFORMS));

    let o = run_bin(common("missing.aml"));
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.aml"));
}
