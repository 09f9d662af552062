//! In-memory RDF for the AML validation pipeline.
//!
//! Terms, an indexed triple set, a Turtle reader/writer and a blank-node
//! aware isomorphism check. Every artifact the pipeline produces (ontology,
//! shapes, reports) travels through this crate as Turtle.

pub mod graph;
pub mod iso;
pub mod term;
pub mod turtle;
pub mod vocab;

pub use graph::{standard_prefixes, Graph, PrefixMap};
pub use iso::{canonical_labels, isomorphic};
pub use term::{BlankNode, Iri, Literal, Term, TermError, Triple};
pub use turtle::{parse_turtle, serialize_turtle, TurtleError, TurtleParser};
