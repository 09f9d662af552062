use std::collections::{HashSet, VecDeque};

use amlshacl_rdf::vocab::{rdf, rdfs};
use amlshacl_rdf::{Graph, Iri, Term};
use indexmap::IndexSet;

use crate::datatype::matches_datatype;
use crate::path::PropertyPath;
use crate::shapes::{Component, Severity, Shape, ShapeKind, ShapesGraph, Target};
use crate::vocab::{self as sh, iri};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationResult {
    pub focus_node: Term,
    pub result_path: Option<PropertyPath>,
    pub value: Option<Term>,
    pub source_shape: Term,
    pub component: Iri,
    pub severity: Severity,
    pub message: String,
}

impl ValidationResult {
    fn sort_key(&self) -> (String, String, String, String, String) {
        (
            self.focus_node.to_string(),
            self.source_shape.to_string(),
            self.component.to_string(),
            self.result_path.as_ref().map(|p| p.to_string()).unwrap_or_default(),
            self.value.as_ref().map(|v| v.to_string()).unwrap_or_default(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// True iff no result has Violation severity.
    pub conforms: bool,
    /// Sorted by focus node, source shape, component, path, value.
    pub results: Vec<ValidationResult>,
}

impl ValidationReport {
    pub fn count(&self, severity: Severity) -> usize {
        self.results.iter().filter(|r| r.severity == severity).count()
    }
}

/// Whether `node` has `rdf:type` `class` or a type that reaches `class`
/// through `rdfs:subClassOf` in `data`.
pub fn is_instance_of(data: &Graph, node: &Term, class: &Term) -> bool {
    let ty = iri(rdf::TYPE);
    let sub = iri(rdfs::SUB_CLASS_OF);
    let mut seen: HashSet<&Term> = HashSet::new();
    let mut queue: VecDeque<&Term> = data.objects(node, &ty).collect();
    while let Some(c) = queue.pop_front() {
        if c == class {
            return true;
        }
        if seen.insert(c) {
            queue.extend(data.objects(c, &sub));
        }
    }
    false
}

fn instances_of(data: &Graph, class: &Term, out: &mut IndexSet<Term>) {
    let ty = iri(rdf::TYPE);
    let sub = iri(rdfs::SUB_CLASS_OF);
    let mut seen: HashSet<&Term> = HashSet::new();
    let mut queue = VecDeque::from([class]);
    while let Some(c) = queue.pop_front() {
        if seen.insert(c) {
            out.extend(data.subjects(&ty, c).cloned());
            queue.extend(data.subjects(&sub, c));
        }
    }
}

/// Focus nodes selected by the shape's targets.
pub fn resolve_targets(shape: &Shape, data: &Graph) -> IndexSet<Term> {
    let mut out = IndexSet::new();
    for t in &shape.targets {
        match t {
            Target::Class(c) | Target::ImplicitClass(c) => instances_of(data, c, &mut out),
            Target::Node(n) => {
                out.insert(n.clone());
            }
            Target::SubjectsOf(p) => out.extend(
                data.matching(None, Some(p), None)
                    .into_iter()
                    .map(|t| t.subject.clone()),
            ),
            Target::ObjectsOf(p) => {
                out.extend(data.matching(None, Some(p), None).into_iter().map(|t| t.object.clone()))
            }
        }
    }
    out
}

/// Validate `data` against every active shape with targets.
pub fn validate(data: &Graph, shapes: &ShapesGraph) -> ValidationReport {
    let v = Validator { data, shapes };
    let mut results = Vec::new();
    for shape in shapes.iter() {
        if shape.deactivated {
            continue;
        }
        for focus in resolve_targets(shape, data) {
            v.validate_shape(shape, &focus, &mut Vec::new(), &mut results);
        }
    }
    results.sort_by_cached_key(ValidationResult::sort_key);
    ValidationReport {
        conforms: !results.iter().any(|r| r.severity == Severity::Violation),
        results,
    }
}

struct Validator<'a> {
    data: &'a Graph,
    shapes: &'a ShapesGraph,
}

/// Shape/node pairs currently being checked. A pair that is reached again
/// while checking itself is assumed to conform, which ends recursion.
type Stack = Vec<(Term, Term)>;

impl Validator<'_> {
    fn conforms(&self, shape_id: &Term, node: &Term, stack: &mut Stack) -> bool {
        let Some(shape) = self.shapes.get(shape_id) else {
            return true;
        };
        let key = (shape_id.clone(), node.clone());
        if stack.contains(&key) {
            return true;
        }
        stack.push(key);
        let mut results = Vec::new();
        self.validate_shape(shape, node, stack, &mut results);
        stack.pop();
        results.is_empty()
    }

    fn validate_shape(&self, shape: &Shape, focus: &Term, stack: &mut Stack, out: &mut Vec<ValidationResult>) {
        if shape.deactivated {
            return;
        }
        let values: IndexSet<Term> = match &shape.path {
            Some(p) => p.evaluate(self.data, focus),
            None => IndexSet::from([focus.clone()]),
        };
        let node_shape = shape.kind == ShapeKind::Node;
        let mut emit = |component: &str, value: Option<&Term>, generated: String| {
            // HasValue reports the missing value, never the focus node
            let value = if node_shape && component != sh::HAS_VALUE_COMPONENT {
                Some(focus)
            } else {
                value
            };
            let message = shape
                .messages
                .first()
                .map(|m| m.lexical().to_string())
                .unwrap_or(generated);
            out.push(ValidationResult {
                focus_node: focus.clone(),
                result_path: shape.path.clone(),
                value: value.cloned(),
                source_shape: shape.id.clone(),
                component: iri(component),
                severity: shape.severity,
                message,
            });
        };
        let path_text = shape
            .path
            .as_ref()
            .map(|p| p.to_string())
            .unwrap_or_else(|| "the focus node".into());
        let mut nested = Vec::new();

        for c in &shape.components {
            let comp = c.component_iri().unwrap_or_default();
            match c {
                Component::MinCount(n) => {
                    if (values.len() as u64) < *n {
                        emit(
                            comp,
                            None,
                            format!("Expected at least {n} value(s) on {path_text}, found {}", values.len()),
                        );
                    }
                }
                Component::MaxCount(n) => {
                    if values.len() as u64 > *n {
                        emit(
                            comp,
                            None,
                            format!("Expected at most {n} value(s) on {path_text}, found {}", values.len()),
                        );
                    }
                }
                Component::Class(class) => {
                    for v in &values {
                        if !is_instance_of(self.data, v, class) {
                            emit(comp, Some(v), format!("Value {v} is not an instance of {class}"));
                        }
                    }
                }
                Component::Datatype(dt) => {
                    for v in &values {
                        let ok = v.as_literal().is_some_and(|l| matches_datatype(l, dt.as_str()));
                        if !ok {
                            emit(
                                comp,
                                Some(v),
                                format!("Value {v} is not a valid literal of datatype {dt}"),
                            );
                        }
                    }
                }
                Component::NodeKind(kind) => {
                    for v in &values {
                        if !kind.matches(v) {
                            emit(comp, Some(v), format!("Value {v} is not of node kind <{}>", kind.iri()));
                        }
                    }
                }
                Component::HasValue(expected) => {
                    if !values.contains(expected) {
                        emit(comp, None, format!("Missing required value {expected} on {path_text}"));
                    }
                }
                Component::In(allowed) => {
                    for v in &values {
                        if !allowed.contains(v) {
                            emit(comp, Some(v), format!("Value {v} is not one of the allowed values"));
                        }
                    }
                }
                Component::Pattern { regex, pattern, .. } => {
                    for v in &values {
                        if v.is_blank() || !regex.is_match(v.lexical()) {
                            emit(comp, Some(v), format!("Value {v} does not match pattern {pattern:?}"));
                        }
                    }
                }
                Component::Node(s) => {
                    for v in &values {
                        if !self.conforms(s, v, stack) {
                            emit(comp, Some(v), format!("Value {v} does not conform to shape {s}"));
                        }
                    }
                }
                Component::Not(s) => {
                    for v in &values {
                        if self.conforms(s, v, stack) {
                            emit(
                                comp,
                                Some(v),
                                format!("Value {v} conforms to shape {s}, which is not allowed"),
                            );
                        }
                    }
                }
                Component::And(list) => {
                    for v in &values {
                        if !list.iter().all(|s| self.conforms(s, v, stack)) {
                            emit(
                                comp,
                                Some(v),
                                format!("Value {v} does not conform to every shape of sh:and"),
                            );
                        }
                    }
                }
                Component::Or(list) => {
                    for v in &values {
                        if !list.iter().any(|s| self.conforms(s, v, stack)) {
                            emit(
                                comp,
                                Some(v),
                                format!("Value {v} does not conform to any shape of sh:or"),
                            );
                        }
                    }
                }
                Component::QualifiedValueShape { shape: s, min, max } => {
                    let n = values.iter().filter(|v| self.conforms(s, v, stack)).count() as u64;
                    if let Some(min) = min.filter(|m| n < *m) {
                        emit(
                            sh::QUALIFIED_MIN_COUNT_COMPONENT,
                            None,
                            format!("Expected at least {min} value(s) on {path_text} conforming to {s}, found {n}"),
                        );
                    }
                    if let Some(max) = max.filter(|m| n > *m) {
                        emit(
                            sh::QUALIFIED_MAX_COUNT_COMPONENT,
                            None,
                            format!("Expected at most {max} value(s) on {path_text} conforming to {s}, found {n}"),
                        );
                    }
                }
                Component::Property(p) => {
                    if let Some(prop) = self.shapes.get(p) {
                        for v in &values {
                            let key = (p.clone(), v.clone());
                            if stack.contains(&key) {
                                continue;
                            }
                            stack.push(key);
                            self.validate_shape(prop, v, stack, &mut nested);
                            stack.pop();
                        }
                    }
                }
            }
        }
        out.append(&mut nested);
    }
}
