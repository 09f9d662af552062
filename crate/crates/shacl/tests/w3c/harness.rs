//! Harness for the vendored W3C SHACL core test cases listed in
//! `selected.txt`. Shared with the acceptance suite of the `amlshacl` crate.
//!
//! Expected and actual reports are compared as graphs after dropping
//! `sh:resultMessage`, which the suite leaves implementation-defined.

use std::collections::{HashSet, VecDeque};
use std::path::Path;

use amlshacl_rdf::{isomorphic, Graph, Iri, Term, TurtleParser};
use amlshacl_shacl::vocab::{self as sh, iri};
use amlshacl_shacl::{parse_shapes, report_to_graph, validate};

const MF: &str = "http://www.w3.org/2001/sw/DataAccess/tests/test-manifest#";
const SHT: &str = "http://www.w3.org/ns/shacl-test#";
const BASE: &str = "http://datashapes.org/sh/tests/core/";

fn base_of(dir: &str, file: &str) -> String {
    format!("{BASE}{dir}/{file}")
}

fn load(suite: &Path, dir: &str, file: &str) -> Graph {
    let path = suite.join(dir).join(file);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    TurtleParser::new()
        .with_base(base_of(dir, file))
        .parse(&text)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The graph named by `iri`, which is the manifest itself or a sibling file.
fn graph_for(suite: &Path, dir: &str, manifest_file: &str, manifest: &Graph, iri: &Term) -> Graph {
    let s = iri.lexical();
    if s == base_of(dir, manifest_file) {
        return manifest.clone();
    }
    let file = s.rsplit('/').next().expect("file name");
    load(suite, dir, file)
}

/// Blank-node closure of the expected report, not descending into values
/// that denote data or shapes nodes.
fn expected_report(manifest: &Graph, root: &Term) -> Graph {
    let leaves: HashSet<Iri> = [sh::FOCUS_NODE, sh::VALUE, sh::SOURCE_SHAPE, sh::RESULT_MESSAGE]
        .into_iter()
        .map(iri)
        .collect();
    let mut out = Graph::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(node) = queue.pop_front() {
        if !seen.insert(node.clone()) {
            continue;
        }
        for t in manifest.matching(Some(&node), None, None) {
            if t.predicate.as_str() == sh::RESULT_MESSAGE {
                continue;
            }
            out.insert(t.clone());
            if t.object.is_blank() && !leaves.contains(&t.predicate) {
                queue.push_back(t.object.clone());
            }
        }
    }
    out
}

/// Run one case, `dir/name`, against the suite in `suite`.
pub fn check(suite: &Path, case: &str) -> Result<(), String> {
    let (dir, name) = case.split_once('/').expect("dir/name");
    let file = format!("{name}.ttl");
    let manifest = load(suite, dir, &file);
    let entries_head = manifest
        .object(&Term::iri(&base_of(dir, &file)).unwrap(), &iri(&format!("{MF}entries")))
        .cloned()
        .ok_or("manifest has no mf:entries")?;
    let entries = manifest.list(&entries_head).ok_or("mf:entries is not a list")?;
    for entry in entries {
        let action = manifest
            .object(&entry, &iri(&format!("{MF}action")))
            .ok_or("entry without mf:action")?;
        let data_iri = manifest
            .object(action, &iri(&format!("{SHT}dataGraph")))
            .ok_or("no sht:dataGraph")?;
        let shapes_iri = manifest
            .object(action, &iri(&format!("{SHT}shapesGraph")))
            .ok_or("no sht:shapesGraph")?;
        let data = graph_for(suite, dir, &file, &manifest, data_iri);
        let shapes_graph = graph_for(suite, dir, &file, &manifest, shapes_iri);
        let expected_root = manifest
            .object(&entry, &iri(&format!("{MF}result")))
            .ok_or("entry without mf:result")?;

        let shapes = parse_shapes(&shapes_graph);
        if expected_root.lexical() == format!("{SHT}Failure") {
            return match shapes {
                Err(_) => Ok(()),
                Ok(_) => Err(format!("{entry}: expected a failure")),
            };
        }
        let shapes = shapes.map_err(|e| format!("{entry}: {e}"))?;
        let report = validate(&data, &shapes);
        let mut actual = report_to_graph(&report);
        actual.retain(|t| t.predicate.as_str() != sh::RESULT_MESSAGE);
        let expected = expected_report(&manifest, expected_root);
        if !isomorphic(&expected, &actual) {
            return Err(format!(
                "{entry}: report mismatch\nexpected:\n{}\nactual:\n{}",
                amlshacl_rdf::serialize_turtle(&expected, true),
                amlshacl_rdf::serialize_turtle(&actual, true)
            ));
        }
        let conforms_expected = manifest
            .object(expected_root, &iri(sh::CONFORMS))
            .map(|c| c.lexical() == "true");
        if conforms_expected != Some(report.conforms) {
            return Err(format!("{entry}: sh:conforms is {}", report.conforms));
        }
    }
    Ok(())
}

/// The case names listed in `selected.txt`.
pub fn selected_cases(suite: &Path) -> Vec<String> {
    let list = std::fs::read_to_string(suite.join("selected.txt")).expect("selected.txt");
    list.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}
