use std::collections::HashMap;
use std::fmt::Write as _;

use indexmap::IndexMap;

use crate::graph::{standard_prefixes, Graph, PrefixMap};
use crate::iso::canonical_labels;
use crate::term::{BlankNode, Iri, Literal, Term, Triple};
use crate::vocab::{rdf, xsd};

/// Serialize `graph` as Turtle.
///
/// With `sort` the output is canonical: blank nodes are relabelled by
/// [`canonical_labels`] and triples are ordered by the lexical forms of their
/// terms, so equal graphs always produce identical bytes.
pub fn serialize_turtle(graph: &Graph, sort: bool) -> String {
    let mut prefixes = standard_prefixes();
    for (p, ns) in graph.prefixes() {
        prefixes.insert(p.clone(), ns.clone());
    }
    let writer = Writer { prefixes: &prefixes };

    let renames: HashMap<BlankNode, BlankNode> = if sort { canonical_labels(graph) } else { HashMap::new() };
    let relabel = |t: &Term| -> Term {
        match t {
            Term::BlankNode(b) => renames
                .get(b)
                .map(|r| Term::BlankNode(r.clone()))
                .unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        }
    };
    let mut triples: Vec<Triple> = graph
        .iter()
        .map(|t| Triple {
            subject: relabel(&t.subject),
            predicate: t.predicate.clone(),
            object: relabel(&t.object),
        })
        .collect();
    if sort {
        triples.sort_by_cached_key(|t| {
            (
                sort_key(&t.subject),
                t.predicate.as_str().to_string(),
                sort_key(&t.object),
            )
        });
    }

    let mut by_subject: IndexMap<Term, IndexMap<Iri, Vec<Term>>> = IndexMap::new();
    for t in triples {
        by_subject
            .entry(t.subject)
            .or_default()
            .entry(t.predicate)
            .or_default()
            .push(t.object);
    }

    let mut out = String::new();
    for (p, ns) in &prefixes {
        let _ = writeln!(out, "@prefix {p}: {} .", write_iri_ref(ns));
    }
    for (subject, preds) in by_subject {
        out.push('\n');
        out.push_str(&writer.term(&subject));
        let n = preds.len();
        for (i, (pred, objects)) in preds.into_iter().enumerate() {
            if i == 0 {
                out.push(' ');
            } else {
                out.push_str("\n    ");
            }
            if pred.as_str() == rdf::TYPE {
                out.push('a');
            } else {
                out.push_str(&writer.iri(&pred));
            }
            out.push(' ');
            let objs: Vec<String> = objects.iter().map(|o| writer.term(o)).collect();
            out.push_str(&objs.join(", "));
            out.push_str(if i + 1 == n { " .\n" } else { " ;" });
        }
    }
    out
}

fn sort_key(t: &Term) -> (u8, String) {
    match t {
        Term::Iri(i) => (0, i.as_str().to_string()),
        Term::BlankNode(b) => (1, natural_label(b.label())),
        Term::Literal(l) => (2, l.to_string()),
    }
}

/// Orders `b2` before `b10`.
fn natural_label(label: &str) -> String {
    match label.strip_prefix('b').and_then(|n| n.parse::<u64>().ok()) {
        Some(n) => format!("b{n:020}"),
        None => label.to_string(),
    }
}

struct Writer<'a> {
    prefixes: &'a PrefixMap,
}

impl Writer<'_> {
    fn term(&self, t: &Term) -> String {
        match t {
            Term::Iri(i) => self.iri(i),
            Term::BlankNode(b) => b.to_string(),
            Term::Literal(l) => self.literal(l),
        }
    }

    fn iri(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        let mut best: Option<(&str, &str)> = None;
        for (p, ns) in self.prefixes {
            if let Some(local) = s.strip_prefix(ns.as_str()) {
                if is_safe_local(local) && best.is_none_or(|(_, b)| ns.len() > b.len()) {
                    best = Some((p, ns));
                }
            }
        }
        match best {
            Some((p, ns)) => format!("{p}:{}", &s[ns.len()..]),
            None => write_iri_ref(s),
        }
    }

    fn literal(&self, l: &Literal) -> String {
        let quoted = Literal::string(l.lexical()).to_string();
        if let Some(tag) = l.language() {
            return format!("{quoted}@{tag}");
        }
        if l.datatype().as_str() == xsd::STRING {
            return quoted;
        }
        format!("{quoted}^^{}", self.iri(l.datatype()))
    }
}

fn is_safe_local(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let ok = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '-';
    let first = local.chars().next().unwrap();
    let last = local.chars().last().unwrap();
    (first.is_ascii_alphanumeric() || first == '_') && ok(last) && local.chars().all(|c| ok(c) || c == '.')
}

fn write_iri_ref(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('<');
    for c in s.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out.push('>');
    out
}
