//! A SHACL core validator over [`amlshacl_rdf`] graphs.
//!
//! Supported: node and property shapes; class, node, subjects-of, objects-of
//! and implicit class targets; predicate, inverse, sequence and alternative
//! paths; the MinCount, MaxCount, Class, Datatype, NodeKind, HasValue, In,
//! Pattern, Node, Not, And, Or and QualifiedValueShape components;
//! `sh:severity`, `sh:message` and `sh:deactivated`. Anything else in the
//! `sh:` namespace is reported as a [`Diagnostic`] and ignored.
//!
//! A report conforms when it has no result of severity `sh:Violation`.

mod datatype;
pub mod path;
mod report;
mod shapes;
mod validate;
pub mod vocab;

pub use datatype::{is_well_formed, matches_datatype};
pub use path::{PathError, PropertyPath};
pub use report::{compact, report_from_graph, report_table, report_to_graph, ReportError};
pub use shapes::{
    parse_shapes, Component, Diagnostic, DiagnosticKind, NodeKind, Severity, Shape, ShapeError, ShapeKind, ShapesGraph,
    Target, IMPLEMENTED_COMPONENTS,
};
pub use validate::{is_instance_of, resolve_targets, validate, ValidationReport, ValidationResult};
