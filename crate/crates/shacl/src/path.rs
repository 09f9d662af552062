use std::collections::HashSet;
use std::fmt;

use amlshacl_rdf::vocab::rdf;
use amlshacl_rdf::{BlankNode, Graph, Iri, Term};
use indexmap::IndexSet;

use crate::vocab::{self as sh, iri};

/// A SHACL property path. Sequence and alternative lists are never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyPath {
    Predicate(Iri),
    Inverse(Box<PropertyPath>),
    Sequence(Vec<PropertyPath>),
    Alternative(Vec<PropertyPath>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathError {
    /// zeroOrMore / oneOrMore / zeroOrOne paths.
    Unsupported(Iri),
    Malformed(String),
}

impl PropertyPath {
    /// Read the path rooted at `node` in a shapes graph.
    pub fn from_graph(graph: &Graph, node: &Term) -> Result<Self, PathError> {
        Self::read(graph, node, &mut HashSet::new())
    }

    fn read(graph: &Graph, node: &Term, seen: &mut HashSet<Term>) -> Result<Self, PathError> {
        if let Term::Iri(p) = node {
            if p.as_str() != rdf::NIL {
                return Ok(PropertyPath::Predicate(p.clone()));
            }
        }
        if node.is_literal() {
            return Err(PathError::Malformed(format!("literal {node} used as a path")));
        }
        if !seen.insert(node.clone()) {
            return Err(PathError::Malformed(format!("cyclic path at {node}")));
        }
        let first = iri(rdf::FIRST);
        let result = if graph.object(node, &first).is_some() || node.as_iri().is_some() {
            let items = graph
                .list(node)
                .ok_or_else(|| PathError::Malformed(format!("{node} is not a well-formed list")))?;
            let steps = items
                .iter()
                .map(|i| Self::read(graph, i, seen))
                .collect::<Result<Vec<_>, _>>()?;
            match steps.len() {
                0 | 1 => {
                    return Err(PathError::Malformed(format!(
                        "sequence path {node} needs at least two members"
                    )))
                }
                _ => PropertyPath::Sequence(steps),
            }
        } else if let Some(inner) = single(graph, node, sh::INVERSE_PATH)? {
            PropertyPath::Inverse(Box::new(Self::read(graph, &inner, seen)?))
        } else if let Some(list) = single(graph, node, sh::ALTERNATIVE_PATH)? {
            let items = graph
                .list(&list)
                .ok_or_else(|| PathError::Malformed(format!("sh:alternativePath of {node} is not a list")))?;
            if items.len() < 2 {
                return Err(PathError::Malformed(format!(
                    "alternative path {node} needs at least two members"
                )));
            }
            PropertyPath::Alternative(
                items
                    .iter()
                    .map(|i| Self::read(graph, i, seen))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            for unsupported in [sh::ZERO_OR_MORE_PATH, sh::ONE_OR_MORE_PATH, sh::ZERO_OR_ONE_PATH] {
                if graph.object(node, &iri(unsupported)).is_some() {
                    return Err(PathError::Unsupported(iri(unsupported)));
                }
            }
            return Err(PathError::Malformed(format!("{node} is not a property path")));
        };
        seen.remove(node);
        Ok(result)
    }

    /// Value nodes reached from `node`, duplicates collapsed, in discovery
    /// order.
    pub fn evaluate(&self, graph: &Graph, node: &Term) -> IndexSet<Term> {
        let mut out = IndexSet::new();
        self.walk(graph, node, &mut out);
        out
    }

    fn walk(&self, graph: &Graph, node: &Term, out: &mut IndexSet<Term>) {
        match self {
            PropertyPath::Predicate(p) => {
                if !node.is_literal() {
                    out.extend(graph.objects(node, p).cloned());
                }
            }
            PropertyPath::Inverse(inner) => match inner.as_ref() {
                PropertyPath::Predicate(p) => out.extend(graph.subjects(p, node).cloned()),
                PropertyPath::Inverse(twice) => twice.walk(graph, node, out),
                PropertyPath::Sequence(steps) => {
                    let reversed: Vec<_> = steps
                        .iter()
                        .rev()
                        .map(|s| PropertyPath::Inverse(Box::new(s.clone())))
                        .collect();
                    PropertyPath::Sequence(reversed).walk(graph, node, out)
                }
                PropertyPath::Alternative(alts) => {
                    for a in alts {
                        PropertyPath::Inverse(Box::new(a.clone())).walk(graph, node, out);
                    }
                }
            },
            PropertyPath::Sequence(steps) => {
                let mut frontier: IndexSet<Term> = IndexSet::from([node.clone()]);
                for step in steps {
                    let mut next = IndexSet::new();
                    for n in &frontier {
                        step.walk(graph, n, &mut next);
                    }
                    frontier = next;
                }
                out.extend(frontier);
            }
            PropertyPath::Alternative(alts) => {
                for a in alts {
                    a.walk(graph, node, out);
                }
            }
        }
    }

    /// Write the path as SHACL RDF into `graph`, minting blank nodes with
    /// `fresh`. Returns the path's root term.
    pub fn to_graph(&self, graph: &mut Graph, fresh: &mut dyn FnMut() -> BlankNode) -> Term {
        match self {
            PropertyPath::Predicate(p) => Term::Iri(p.clone()),
            PropertyPath::Inverse(inner) => {
                let node = Term::BlankNode(fresh());
                let o = inner.to_graph(graph, fresh);
                graph.add(node.clone(), iri(sh::INVERSE_PATH), o);
                node
            }
            PropertyPath::Sequence(steps) => {
                let items: Vec<Term> = steps.iter().map(|s| s.to_graph(graph, fresh)).collect();
                write_list(graph, &items, fresh)
            }
            PropertyPath::Alternative(alts) => {
                let node = Term::BlankNode(fresh());
                let items: Vec<Term> = alts.iter().map(|s| s.to_graph(graph, fresh)).collect();
                let list = write_list(graph, &items, fresh);
                graph.add(node.clone(), iri(sh::ALTERNATIVE_PATH), list);
                node
            }
        }
    }
}

fn single(graph: &Graph, node: &Term, pred: &str) -> Result<Option<Term>, PathError> {
    let values: Vec<_> = graph.objects(node, &iri(pred)).collect();
    match values.as_slice() {
        [] => Ok(None),
        [v] => Ok(Some((*v).clone())),
        _ => Err(PathError::Malformed(format!("{node} has several <{pred}> values"))),
    }
}

pub(crate) fn write_list(graph: &mut Graph, items: &[Term], fresh: &mut dyn FnMut() -> BlankNode) -> Term {
    let nil = Term::Iri(iri(rdf::NIL));
    let cells: Vec<Term> = items.iter().map(|_| Term::BlankNode(fresh())).collect();
    for (i, item) in items.iter().enumerate() {
        graph.add(cells[i].clone(), iri(rdf::FIRST), item.clone());
        let rest = cells.get(i + 1).cloned().unwrap_or_else(|| nil.clone());
        graph.add(cells[i].clone(), iri(rdf::REST), rest);
    }
    cells.first().cloned().unwrap_or(nil)
}

/// SPARQL property path syntax, e.g. `^<p>/<q>`.
impl fmt::Display for PropertyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyPath::Predicate(p) => write!(f, "{p}"),
            PropertyPath::Inverse(inner) => match inner.as_ref() {
                PropertyPath::Predicate(_) => write!(f, "^{inner}"),
                _ => write!(f, "^({inner})"),
            },
            PropertyPath::Sequence(steps) => join(f, steps, "/"),
            PropertyPath::Alternative(alts) => join(f, alts, "|"),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, parts: &[PropertyPath], sep: &str) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        match p {
            PropertyPath::Sequence(_) | PropertyPath::Alternative(_) => write!(f, "({p})")?,
            _ => write!(f, "{p}")?,
        }
    }
    Ok(())
}
