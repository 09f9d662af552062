use std::collections::HashSet;

use amlshacl_rdf::vocab::{rdf, xsd};
use amlshacl_rdf::{BlankNode, Graph, Iri, Literal, PrefixMap, Term};

use crate::path::PropertyPath;
use crate::shapes::Severity;
use crate::validate::{ValidationReport, ValidationResult};
use crate::vocab::{self as sh, iri};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed validation report: {0}")]
pub struct ReportError(pub String);

/// Write the report as a `sh:ValidationReport` graph. Blank nodes minted
/// for the report never clash with blank nodes carried over from the data.
pub fn report_to_graph(report: &ValidationReport) -> Graph {
    let mut taken: HashSet<String> = HashSet::new();
    for r in &report.results {
        for t in [Some(&r.focus_node), r.value.as_ref(), Some(&r.source_shape)]
            .into_iter()
            .flatten()
        {
            if let Some(b) = t.as_blank() {
                taken.insert(b.label().to_string());
            }
        }
    }
    let mut n = 0usize;
    let mut fresh = move || loop {
        n += 1;
        let label = format!("r{n}");
        if !taken.contains(&label) {
            return BlankNode::new(label).expect("valid label");
        }
    };

    let mut g = Graph::new();
    g.set_prefix("sh", sh::NS);
    let root = Term::BlankNode(fresh());
    g.add(root.clone(), iri(rdf::TYPE), iri(sh::VALIDATION_REPORT));
    g.add(root.clone(), iri(sh::CONFORMS), Literal::boolean(report.conforms));
    for r in &report.results {
        let node = Term::BlankNode(fresh());
        g.add(root.clone(), iri(sh::RESULT), node.clone());
        g.add(node.clone(), iri(rdf::TYPE), iri(sh::VALIDATION_RESULT));
        g.add(node.clone(), iri(sh::FOCUS_NODE), r.focus_node.clone());
        if let Some(p) = &r.result_path {
            let p = p.to_graph(&mut g, &mut fresh);
            g.add(node.clone(), iri(sh::RESULT_PATH), p);
        }
        if let Some(v) = &r.value {
            g.add(node.clone(), iri(sh::VALUE), v.clone());
        }
        g.add(node.clone(), iri(sh::SOURCE_SHAPE), r.source_shape.clone());
        g.add(node.clone(), iri(sh::SOURCE_CONSTRAINT_COMPONENT), r.component.clone());
        g.add(node.clone(), iri(sh::RESULT_SEVERITY), iri(r.severity.iri()));
        g.add(
            node.clone(),
            iri(sh::RESULT_MESSAGE),
            Literal::string(r.message.clone()),
        );
    }
    g
}

/// Read a report written by [`report_to_graph`] (or any report using the
/// same vocabulary). Results come back in the canonical sort order.
pub fn report_from_graph(g: &Graph) -> Result<ValidationReport, ReportError> {
    let roots: Vec<&Term> = g
        .subjects(&iri(rdf::TYPE), &Term::Iri(iri(sh::VALIDATION_REPORT)))
        .collect();
    let [root] = roots.as_slice() else {
        return Err(ReportError(format!(
            "expected one sh:ValidationReport, found {}",
            roots.len()
        )));
    };
    let conforms = match g.object(root, &iri(sh::CONFORMS)).and_then(Term::as_literal) {
        Some(l) if l.datatype().as_str() == xsd::BOOLEAN => l.lexical() == "true" || l.lexical() == "1",
        _ => return Err(ReportError("missing boolean sh:conforms".into())),
    };
    let one = |node: &Term, p: &str| -> Result<Term, ReportError> {
        g.object(node, &iri(p))
            .cloned()
            .ok_or_else(|| ReportError(format!("result {node} has no <{p}>")))
    };
    let mut results = Vec::new();
    for node in g.objects(root, &iri(sh::RESULT)) {
        let severity = match one(node, sh::RESULT_SEVERITY)?.as_iri().map(Iri::as_str) {
            Some(sh::VIOLATION) => Severity::Violation,
            Some(sh::WARNING) => Severity::Warning,
            Some(sh::INFO) => Severity::Info,
            other => return Err(ReportError(format!("unknown severity {other:?}"))),
        };
        let component = one(node, sh::SOURCE_CONSTRAINT_COMPONENT)?
            .as_iri()
            .cloned()
            .ok_or_else(|| ReportError("sh:sourceConstraintComponent is not an IRI".into()))?;
        let result_path = g
            .object(node, &iri(sh::RESULT_PATH))
            .map(|p| PropertyPath::from_graph(g, p))
            .transpose()
            .map_err(|e| ReportError(format!("bad sh:resultPath: {e:?}")))?;
        results.push(ValidationResult {
            focus_node: one(node, sh::FOCUS_NODE)?,
            result_path,
            value: g.object(node, &iri(sh::VALUE)).cloned(),
            source_shape: one(node, sh::SOURCE_SHAPE)?,
            component,
            severity,
            message: g
                .object(node, &iri(sh::RESULT_MESSAGE))
                .map(|m| m.lexical().to_string())
                .unwrap_or_default(),
        });
    }
    results.sort_by_cached_key(|r| {
        (
            r.focus_node.to_string(),
            r.source_shape.to_string(),
            r.component.to_string(),
            r.result_path.as_ref().map(|p| p.to_string()).unwrap_or_default(),
            r.value.as_ref().map(|v| v.to_string()).unwrap_or_default(),
        )
    });
    Ok(ValidationReport { conforms, results })
}

/// Shorten an IRI with the longest matching namespace in `prefixes`.
pub fn compact(term: &Term, prefixes: &PrefixMap) -> String {
    let Term::Iri(i) = term else {
        return term.to_string();
    };
    let s = i.as_str();
    prefixes
        .iter()
        .filter(|(_, ns)| s.starts_with(ns.as_str()))
        .max_by_key(|(_, ns)| ns.len())
        .map(|(p, ns)| (p, &s[ns.len()..]))
        .filter(|(_, local)| {
            local
                .chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        })
        .map(|(p, local)| format!("{p}:{local}"))
        .unwrap_or_else(|| term.to_string())
}

fn compact_path(path: &PropertyPath, prefixes: &PrefixMap) -> String {
    match path {
        PropertyPath::Predicate(p) => compact(&Term::Iri(p.clone()), prefixes),
        PropertyPath::Inverse(inner) => match inner.as_ref() {
            PropertyPath::Predicate(_) => format!("^{}", compact_path(inner, prefixes)),
            _ => format!("^({})", compact_path(inner, prefixes)),
        },
        PropertyPath::Sequence(s) | PropertyPath::Alternative(s) => {
            let sep = if matches!(path, PropertyPath::Sequence(_)) {
                "/"
            } else {
                "|"
            };
            s.iter()
                .map(|p| match p {
                    PropertyPath::Sequence(_) | PropertyPath::Alternative(_) => {
                        format!("({})", compact_path(p, prefixes))
                    }
                    _ => compact_path(p, prefixes),
                })
                .collect::<Vec<_>>()
                .join(sep)
        }
    }
}

/// Plain-text table of the results, one row per result.
pub fn report_table(report: &ValidationReport, prefixes: &PrefixMap) -> String {
    let header = ["Severity", "Focus", "Path", "Value", "Component", "Message"];
    let rows: Vec<[String; 6]> = report
        .results
        .iter()
        .map(|r| {
            [
                r.severity.label().to_string(),
                compact(&r.focus_node, prefixes),
                r.result_path
                    .as_ref()
                    .map(|p| compact_path(p, prefixes))
                    .unwrap_or_else(|| "-".into()),
                r.value
                    .as_ref()
                    .map(|v| compact(v, prefixes))
                    .unwrap_or_else(|| "-".into()),
                r.component
                    .as_str()
                    .trim_start_matches(sh::NS)
                    .trim_end_matches("ConstraintComponent")
                    .to_string(),
                r.message.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = format!(
        "conforms: {}  violations: {}  warnings: {}  info: {}\n",
        report.conforms,
        report.count(Severity::Violation),
        report.count(Severity::Warning),
        report.count(Severity::Info)
    );
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    for row in std::iter::once(header.as_slice()).chain(rows.iter().map(|r| r.as_slice())) {
        let line: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
