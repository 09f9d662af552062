use std::collections::BTreeSet;
use std::fmt;

use amlshacl_rdf::vocab::{owl, rdf, rdfs, xsd};
use amlshacl_rdf::{Graph, Iri, Literal, Term};
use indexmap::IndexMap;
use regex::{Regex, RegexBuilder};

use crate::path::{PathError, PropertyPath};
use crate::vocab::{self as sh, iri};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Node,
    Property,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Class(Term),
    Node(Term),
    SubjectsOf(Iri),
    ObjectsOf(Iri),
    /// The shape is itself a class.
    ImplicitClass(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Violation,
    Warning,
    Info,
}

impl Severity {
    pub fn iri(self) -> &'static str {
        match self {
            Severity::Violation => sh::VIOLATION,
            Severity::Warning => sh::WARNING,
            Severity::Info => sh::INFO,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Severity::Violation => "Violation",
            Severity::Warning => "Warning",
            Severity::Info => "Info",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    BlankNode,
    Iri,
    Literal,
    BlankNodeOrIri,
    BlankNodeOrLiteral,
    IriOrLiteral,
}

impl NodeKind {
    fn from_iri(s: &str) -> Option<Self> {
        Some(match s {
            sh::BLANK_NODE => NodeKind::BlankNode,
            sh::IRI => NodeKind::Iri,
            sh::LITERAL => NodeKind::Literal,
            sh::BLANK_NODE_OR_IRI => NodeKind::BlankNodeOrIri,
            sh::BLANK_NODE_OR_LITERAL => NodeKind::BlankNodeOrLiteral,
            sh::IRI_OR_LITERAL => NodeKind::IriOrLiteral,
            _ => return None,
        })
    }

    pub fn iri(self) -> &'static str {
        match self {
            NodeKind::BlankNode => sh::BLANK_NODE,
            NodeKind::Iri => sh::IRI,
            NodeKind::Literal => sh::LITERAL,
            NodeKind::BlankNodeOrIri => sh::BLANK_NODE_OR_IRI,
            NodeKind::BlankNodeOrLiteral => sh::BLANK_NODE_OR_LITERAL,
            NodeKind::IriOrLiteral => sh::IRI_OR_LITERAL,
        }
    }

    pub fn matches(self, term: &Term) -> bool {
        let (b, i, l) = match term {
            Term::BlankNode(_) => (true, false, false),
            Term::Iri(_) => (false, true, false),
            Term::Literal(_) => (false, false, true),
        };
        match self {
            NodeKind::BlankNode => b,
            NodeKind::Iri => i,
            NodeKind::Literal => l,
            NodeKind::BlankNodeOrIri => b || i,
            NodeKind::BlankNodeOrLiteral => b || l,
            NodeKind::IriOrLiteral => i || l,
        }
    }
}

/// One constraint of a shape. Shape references point into the
/// [`ShapesGraph`] by shape id.
#[derive(Debug, Clone)]
pub enum Component {
    MinCount(u64),
    MaxCount(u64),
    Class(Term),
    Datatype(Iri),
    NodeKind(NodeKind),
    HasValue(Term),
    In(Vec<Term>),
    Pattern {
        regex: Regex,
        pattern: String,
        flags: Option<String>,
    },
    Node(Term),
    Not(Term),
    And(Vec<Term>),
    Or(Vec<Term>),
    QualifiedValueShape {
        shape: Term,
        min: Option<u64>,
        max: Option<u64>,
    },
    /// `sh:property`: results come from the referenced property shape.
    Property(Term),
}

impl Component {
    /// The constraint component IRI reported for this constraint. The
    /// qualified component reports one of two IRIs, see
    /// [`sh::QUALIFIED_MIN_COUNT_COMPONENT`].
    pub fn component_iri(&self) -> Option<&'static str> {
        Some(match self {
            Component::MinCount(_) => sh::MIN_COUNT_COMPONENT,
            Component::MaxCount(_) => sh::MAX_COUNT_COMPONENT,
            Component::Class(_) => sh::CLASS_COMPONENT,
            Component::Datatype(_) => sh::DATATYPE_COMPONENT,
            Component::NodeKind(_) => sh::NODE_KIND_COMPONENT,
            Component::HasValue(_) => sh::HAS_VALUE_COMPONENT,
            Component::In(_) => sh::IN_COMPONENT,
            Component::Pattern { .. } => sh::PATTERN_COMPONENT,
            Component::Node(_) => sh::NODE_COMPONENT,
            Component::Not(_) => sh::NOT_COMPONENT,
            Component::And(_) => sh::AND_COMPONENT,
            Component::Or(_) => sh::OR_COMPONENT,
            Component::QualifiedValueShape { .. } | Component::Property(_) => return None,
        })
    }
}

/// Every component IRI the engine can report.
pub const IMPLEMENTED_COMPONENTS: &[&str] = &[
    sh::MIN_COUNT_COMPONENT,
    sh::MAX_COUNT_COMPONENT,
    sh::CLASS_COMPONENT,
    sh::DATATYPE_COMPONENT,
    sh::NODE_KIND_COMPONENT,
    sh::HAS_VALUE_COMPONENT,
    sh::IN_COMPONENT,
    sh::PATTERN_COMPONENT,
    sh::NODE_COMPONENT,
    sh::NOT_COMPONENT,
    sh::AND_COMPONENT,
    sh::OR_COMPONENT,
    sh::QUALIFIED_MIN_COUNT_COMPONENT,
    sh::QUALIFIED_MAX_COUNT_COMPONENT,
];

#[derive(Debug, Clone)]
pub struct Shape {
    pub id: Term,
    pub kind: ShapeKind,
    pub targets: Vec<Target>,
    pub path: Option<PropertyPath>,
    pub components: Vec<Component>,
    pub severity: Severity,
    /// `sh:message` values, sorted.
    pub messages: Vec<Literal>,
    pub deactivated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// A `sh:` parameter the engine does not implement; it is ignored.
    UnsupportedComponent(Iri),
    /// A path kind the engine does not evaluate; the shape is skipped.
    UnsupportedPath(Iri),
    /// A parameter that does not apply to this kind of shape (e.g.
    /// `sh:minCount` on a node shape); it is ignored.
    NotApplicable(Iri),
    /// A `sh:severity` other than Violation/Warning/Info; Violation is used.
    UnknownSeverity(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub shape: Term,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DiagnosticKind::UnsupportedComponent(p) => {
                write!(f, "{}: unsupported constraint parameter {p} ignored", self.shape)
            }
            DiagnosticKind::UnsupportedPath(p) => {
                write!(f, "{}: unsupported path kind {p}; shape skipped", self.shape)
            }
            DiagnosticKind::NotApplicable(p) => {
                write!(f, "{}: {p} does not apply to this shape and is ignored", self.shape)
            }
            DiagnosticKind::UnknownSeverity(s) => {
                write!(f, "{}: unknown severity {s}; using sh:Violation", self.shape)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("ill-formed shape {shape}: {reason}")]
    IllFormedShape { shape: String, reason: String },
}

fn ill(shape: &Term, reason: impl Into<String>) -> ShapeError {
    ShapeError::IllFormedShape {
        shape: shape.to_string(),
        reason: reason.into(),
    }
}

/// Compiled shapes, keyed by shape id in a deterministic order.
#[derive(Debug, Clone, Default)]
pub struct ShapesGraph {
    shapes: IndexMap<Term, Shape>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ShapesGraph {
    pub fn get(&self, id: &Term) -> Option<&Shape> {
        self.shapes.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Shape> + '_ {
        self.shapes.values()
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn count(&self, kind: ShapeKind) -> usize {
        self.iter().filter(|s| s.kind == kind).count()
    }
}

const TARGETS: [&str; 4] = [
    sh::TARGET_CLASS,
    sh::TARGET_NODE,
    sh::TARGET_SUBJECTS_OF,
    sh::TARGET_OBJECTS_OF,
];

/// Compile the shapes in `graph`.
///
/// Shapes are nodes typed `sh:NodeShape`/`sh:PropertyShape`, nodes with a
/// target, and every node referenced as a shape (`sh:node`, `sh:not`,
/// `sh:property`, `sh:qualifiedValueShape`, members of `sh:and`/`sh:or`).
pub fn parse_shapes(graph: &Graph) -> Result<ShapesGraph, ShapeError> {
    let ty = iri(rdf::TYPE);
    let mut candidates: BTreeSet<(String, Term)> = BTreeSet::new();
    let mut add = |t: &Term| {
        if !t.is_literal() {
            candidates.insert((t.to_string(), t.clone()));
        }
    };
    for class in [sh::NODE_SHAPE, sh::PROPERTY_SHAPE] {
        graph.subjects(&ty, &Term::Iri(iri(class))).for_each(&mut add);
    }
    for target in TARGETS {
        for t in graph.matching(None, Some(&iri(target)), None) {
            add(&t.subject);
        }
    }
    let mut property_refs = BTreeSet::new();
    for p in [sh::NODE, sh::NOT, sh::PROPERTY, sh::QUALIFIED_VALUE_SHAPE] {
        for t in graph.matching(None, Some(&iri(p)), None) {
            add(&t.object);
            if p == sh::PROPERTY {
                property_refs.insert(t.object.clone());
            }
        }
    }
    for p in [sh::AND, sh::OR] {
        for t in graph.matching(None, Some(&iri(p)), None) {
            for member in graph.list(&t.object).unwrap_or_default() {
                add(&member);
            }
        }
    }

    let mut out = ShapesGraph::default();
    for (_, id) in candidates {
        let shape = parse_shape(graph, &id, property_refs.contains(&id), &mut out.diagnostics)?;
        out.shapes.insert(id, shape);
    }
    Ok(out)
}

fn non_negative(shape: &Term, pred: &str, value: &Term) -> Result<u64, ShapeError> {
    value
        .as_literal()
        .filter(|l| l.datatype().as_str() == xsd::INTEGER)
        .and_then(|l| l.lexical().trim_start_matches('+').parse::<u64>().ok())
        .ok_or_else(|| {
            ill(
                shape,
                format!("<{pred}> must be a non-negative xsd:integer, got {value}"),
            )
        })
}

fn at_most_one<'a>(graph: &'a Graph, shape: &Term, pred: &str) -> Result<Option<&'a Term>, ShapeError> {
    let values: Vec<&Term> = graph.objects(shape, &iri(pred)).collect();
    match values.as_slice() {
        [] => Ok(None),
        [v] => Ok(Some(v)),
        _ => Err(ill(shape, format!("more than one <{pred}> value"))),
    }
}

fn compile_pattern(shape: &Term, pattern: &str, flags: Option<&str>) -> Result<Regex, ShapeError> {
    let mut source = pattern.to_string();
    let mut b = RegexBuilder::new(pattern);
    for f in flags.unwrap_or("").chars() {
        match f {
            'i' => {
                b.case_insensitive(true);
            }
            'm' => {
                b.multi_line(true);
            }
            's' => {
                b.dot_matches_new_line(true);
            }
            'x' => {
                b.ignore_whitespace(true);
            }
            'q' => source = regex::escape(pattern),
            other => return Err(ill(shape, format!("unsupported sh:flags character {other:?}"))),
        }
    }
    if source != pattern {
        b = {
            let mut escaped = RegexBuilder::new(&source);
            let fl = flags.unwrap_or("");
            escaped
                .case_insensitive(fl.contains('i'))
                .multi_line(fl.contains('m'))
                .dot_matches_new_line(fl.contains('s'));
            escaped
        };
    }
    b.build()
        .map_err(|e| ill(shape, format!("sh:pattern {pattern:?} does not compile: {e}")))
}

fn list_of(graph: &Graph, shape: &Term, pred: &str, value: &Term) -> Result<Vec<Term>, ShapeError> {
    graph
        .list(value)
        .ok_or_else(|| ill(shape, format!("<{pred}> value {value} is not an RDF list")))
}

fn parse_shape(
    graph: &Graph,
    id: &Term,
    referenced_as_property: bool,
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<Shape, ShapeError> {
    let ty = iri(rdf::TYPE);
    let types: Vec<&Term> = graph.objects(id, &ty).collect();
    let typed = |c: &str| types.iter().any(|t| t.as_iri().map(Iri::as_str) == Some(c));

    let path = match at_most_one(graph, id, sh::PATH)? {
        None => None,
        Some(p) => match PropertyPath::from_graph(graph, p) {
            Ok(path) => Some(Ok(path)),
            Err(PathError::Unsupported(kind)) => Some(Err(kind)),
            Err(PathError::Malformed(m)) => return Err(ill(id, m)),
        },
    };
    let kind = if path.is_some() {
        if typed(sh::NODE_SHAPE) {
            return Err(ill(id, "a sh:NodeShape must not have sh:path"));
        }
        ShapeKind::Property
    } else {
        if typed(sh::PROPERTY_SHAPE) {
            return Err(ill(id, "sh:PropertyShape without sh:path"));
        }
        if referenced_as_property {
            return Err(ill(id, "value of sh:property has no sh:path"));
        }
        ShapeKind::Node
    };
    let mut deactivated = graph
        .objects(id, &iri(sh::DEACTIVATED))
        .any(|v| v.as_literal() == Some(&Literal::boolean(true)));
    let path = match path {
        None => None,
        Some(Ok(p)) => Some(p),
        Some(Err(kind)) => {
            diagnostics.push(Diagnostic {
                shape: id.clone(),
                kind: DiagnosticKind::UnsupportedPath(kind),
            });
            deactivated = true;
            None
        }
    };

    let mut targets = Vec::new();
    for v in graph.objects(id, &iri(sh::TARGET_CLASS)) {
        targets.push(Target::Class(v.clone()));
    }
    for v in graph.objects(id, &iri(sh::TARGET_NODE)) {
        targets.push(Target::Node(v.clone()));
    }
    for (pred, ctor) in [
        (sh::TARGET_SUBJECTS_OF, Target::SubjectsOf as fn(Iri) -> Target),
        (sh::TARGET_OBJECTS_OF, Target::ObjectsOf),
    ] {
        for v in graph.objects(id, &iri(pred)) {
            let p = v
                .as_iri()
                .ok_or_else(|| ill(id, format!("<{pred}> value {v} is not an IRI")))?;
            targets.push(ctor(p.clone()));
        }
    }
    if id.as_iri().is_some() && (typed(rdfs::CLASS) || typed(owl::CLASS)) {
        targets.push(Target::ImplicitClass(id.clone()));
    }

    let severity = match at_most_one(graph, id, sh::SEVERITY)? {
        None => Severity::Violation,
        Some(t) => match t.as_iri().map(Iri::as_str) {
            Some(sh::VIOLATION) => Severity::Violation,
            Some(sh::WARNING) => Severity::Warning,
            Some(sh::INFO) => Severity::Info,
            _ => {
                diagnostics.push(Diagnostic {
                    shape: id.clone(),
                    kind: DiagnosticKind::UnknownSeverity(t.clone()),
                });
                Severity::Violation
            }
        },
    };
    let mut messages: Vec<Literal> = graph
        .objects(id, &iri(sh::MESSAGE))
        .filter_map(|t| t.as_literal().cloned())
        .collect();
    messages.sort();

    let mut components = Vec::new();
    let values = |pred: &str| -> Vec<Term> { graph.objects(id, &iri(pred)).cloned().collect() };
    let property_only = |pred: &str, diagnostics: &mut Vec<Diagnostic>| -> bool {
        if kind == ShapeKind::Node && !values(pred).is_empty() {
            diagnostics.push(Diagnostic {
                shape: id.clone(),
                kind: DiagnosticKind::NotApplicable(iri(pred)),
            });
            return false;
        }
        true
    };

    if property_only(sh::MIN_COUNT, diagnostics) {
        for v in values(sh::MIN_COUNT) {
            components.push(Component::MinCount(non_negative(id, sh::MIN_COUNT, &v)?));
        }
    }
    if property_only(sh::MAX_COUNT, diagnostics) {
        for v in values(sh::MAX_COUNT) {
            components.push(Component::MaxCount(non_negative(id, sh::MAX_COUNT, &v)?));
        }
    }
    for v in values(sh::CLASS) {
        if v.is_literal() {
            return Err(ill(id, format!("sh:class value {v} is a literal")));
        }
        components.push(Component::Class(v));
    }
    for v in values(sh::DATATYPE) {
        let dt = v
            .as_iri()
            .ok_or_else(|| ill(id, format!("sh:datatype value {v} is not an IRI")))?;
        components.push(Component::Datatype(dt.clone()));
    }
    for v in values(sh::NODE_KIND) {
        let k = v
            .as_iri()
            .and_then(|i| NodeKind::from_iri(i.as_str()))
            .ok_or_else(|| ill(id, format!("sh:nodeKind value {v} is not a node kind")))?;
        components.push(Component::NodeKind(k));
    }
    for v in values(sh::HAS_VALUE) {
        components.push(Component::HasValue(v));
    }
    for v in values(sh::IN) {
        components.push(Component::In(list_of(graph, id, sh::IN, &v)?));
    }
    let flags = match at_most_one(graph, id, sh::FLAGS)? {
        None => None,
        Some(f) => Some(
            f.as_literal()
                .map(|l| l.lexical().to_string())
                .ok_or_else(|| ill(id, "sh:flags must be a literal"))?,
        ),
    };
    for v in values(sh::PATTERN) {
        let pattern = v
            .as_literal()
            .map(|l| l.lexical().to_string())
            .ok_or_else(|| ill(id, "sh:pattern must be a literal"))?;
        let regex = compile_pattern(id, &pattern, flags.as_deref())?;
        components.push(Component::Pattern {
            regex,
            pattern,
            flags: flags.clone(),
        });
    }
    for v in values(sh::NODE) {
        components.push(Component::Node(v));
    }
    for v in values(sh::NOT) {
        components.push(Component::Not(v));
    }
    for v in values(sh::AND) {
        components.push(Component::And(list_of(graph, id, sh::AND, &v)?));
    }
    for v in values(sh::OR) {
        components.push(Component::Or(list_of(graph, id, sh::OR, &v)?));
    }
    let qualified = values(sh::QUALIFIED_VALUE_SHAPE);
    if !qualified.is_empty() && property_only(sh::QUALIFIED_VALUE_SHAPE, diagnostics) {
        let min = at_most_one(graph, id, sh::QUALIFIED_MIN_COUNT)?
            .map(|v| non_negative(id, sh::QUALIFIED_MIN_COUNT, v))
            .transpose()?;
        let max = at_most_one(graph, id, sh::QUALIFIED_MAX_COUNT)?
            .map(|v| non_negative(id, sh::QUALIFIED_MAX_COUNT, v))
            .transpose()?;
        for shape in qualified {
            components.push(Component::QualifiedValueShape { shape, min, max });
        }
    }
    for v in values(sh::PROPERTY) {
        components.push(Component::Property(v));
    }

    let mut unsupported: BTreeSet<&str> = BTreeSet::new();
    for t in graph.matching(Some(id), None, None) {
        let p = t.predicate.as_str();
        if p.starts_with(sh::NS) && !sh::KNOWN.contains(&p) {
            unsupported.insert(p);
        }
    }
    for p in unsupported {
        diagnostics.push(Diagnostic {
            shape: id.clone(),
            kind: DiagnosticKind::UnsupportedComponent(iri(p)),
        });
    }

    Ok(Shape {
        id: id.clone(),
        kind,
        targets,
        path,
        components,
        severity,
        messages,
        deactivated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use amlshacl_rdf::parse_turtle;

    fn shapes(ttl: &str) -> Result<ShapesGraph, ShapeError> {
        parse_shapes(
            &parse_turtle(&format!(
                "@prefix ex: <http://e/> .\n@prefix sh: <http://www.w3.org/ns/shacl#> .\n{ttl}"
            ))
            .unwrap(),
        )
    }

    #[test]
    fn empty_graph_has_no_shapes() {
        assert!(shapes("").unwrap().is_empty());
    }

    #[test]
    fn qualified_rule_compiles() {
        let g = shapes(
            "ex:S a sh:NodeShape ; sh:targetClass ex:Subnet ;
               sh:property ex:P .
             ex:P sh:path ex:hasInterface ;
               sh:qualifiedValueShape [ sh:class ex:LEP ] ;
               sh:qualifiedMinCount 1 ; sh:qualifiedMaxCount 1 .",
        )
        .unwrap();
        assert_eq!(g.count(ShapeKind::Property), 1);
        // the anonymous qualified value shape is a node shape too
        assert_eq!(g.count(ShapeKind::Node), 2);
        let p = g.get(&Term::iri("http://e/P").unwrap()).unwrap();
        assert!(matches!(
            p.components.as_slice(),
            [Component::QualifiedValueShape {
                min: Some(1),
                max: Some(1),
                ..
            }]
        ));
        assert!(g.diagnostics.is_empty());
    }

    #[test]
    fn sparql_constraint_is_diagnosed() {
        let g = shapes("ex:S a sh:NodeShape ; sh:sparql [ sh:select \"SELECT $this {}\" ] .").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(
            g.diagnostics,
            [Diagnostic {
                shape: Term::iri("http://e/S").unwrap(),
                kind: DiagnosticKind::UnsupportedComponent(iri("http://www.w3.org/ns/shacl#sparql")),
            }]
        );
    }

    #[test]
    fn ill_formed_shapes_are_rejected() {
        for bad in [
            "ex:S a sh:PropertyShape ; sh:minCount 1 .",
            "ex:S a sh:NodeShape ; sh:property [ sh:minCount 1 ] .",
            "ex:S sh:targetNode ex:a ; sh:path ex:p ; sh:minCount -1 .",
            "ex:S sh:targetNode ex:a ; sh:path ex:p ; sh:maxCount \"2\" .",
            "ex:S sh:targetNode ex:a ; sh:pattern \"(\" .",
            "ex:S sh:targetNode ex:a ; sh:in ex:notAList .",
            "ex:S sh:targetNode ex:a ; sh:nodeKind ex:Weird .",
            "ex:S sh:targetNode ex:a ; sh:path ( ) .",
            "ex:S a sh:NodeShape ; sh:path ex:p .",
        ] {
            assert!(matches!(shapes(bad), Err(ShapeError::IllFormedShape { .. })), "{bad}");
        }
    }

    #[test]
    fn transitive_path_skips_shape() {
        let g = shapes("ex:S sh:targetNode ex:a ; sh:path [ sh:oneOrMorePath ex:p ] ; sh:minCount 1 .").unwrap();
        assert!(g.iter().next().unwrap().deactivated);
        assert!(matches!(g.diagnostics[0].kind, DiagnosticKind::UnsupportedPath(_)));
    }

    #[test]
    fn node_shape_counts_are_not_applicable() {
        let g = shapes("ex:S sh:targetNode ex:a ; sh:minCount 1 .").unwrap();
        assert!(g.iter().next().unwrap().components.is_empty());
        assert!(matches!(g.diagnostics[0].kind, DiagnosticKind::NotApplicable(_)));
    }

    #[test]
    fn severity_and_messages() {
        let g = shapes("ex:S sh:targetNode ex:a ; sh:severity sh:Warning ; sh:message \"b\" , \"a\" ; sh:class ex:C .")
            .unwrap();
        let s = g.iter().next().unwrap();
        assert_eq!(s.severity, Severity::Warning);
        assert_eq!(s.messages[0].lexical(), "a");
    }
}
