use std::collections::{BTreeMap, HashMap, HashSet};

use indexmap::IndexSet;

use crate::term::{BlankNode, Iri, Term, Triple};
use crate::vocab::{self, rdf, STANDARD_PREFIXES};

/// Prefix name to namespace IRI.
pub type PrefixMap = BTreeMap<String, String>;

pub fn standard_prefixes() -> PrefixMap {
    STANDARD_PREFIXES
        .iter()
        .map(|(p, ns)| (p.to_string(), ns.to_string()))
        .collect()
}

/// An in-memory set of triples with subject, predicate and object indexes.
///
/// Iteration follows insertion order. Graphs are built up front and then only
/// read, so there is no incremental removal; [`Graph::retain`] rebuilds.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: IndexSet<Triple>,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Iri, Vec<usize>>,
    by_object: HashMap<Term, Vec<usize>>,
    prefixes: PrefixMap,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.triples.contains(&triple) {
            return false;
        }
        let idx = self.triples.len();
        self.by_subject.entry(triple.subject.clone()).or_default().push(idx);
        self.by_predicate.entry(triple.predicate.clone()).or_default().push(idx);
        self.by_object.entry(triple.object.clone()).or_default().push(idx);
        self.triples.insert(triple);
        true
    }

    pub fn add(&mut self, subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>) {
        self.insert(Triple::new(subject, predicate, object));
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    /// All triples agreeing with every bound position.
    pub fn matching(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<&Triple> {
        let lists = [
            s.map(|s| self.by_subject.get(s)),
            o.map(|o| self.by_object.get(o)),
            p.map(|p| self.by_predicate.get(p)),
        ];
        let mut candidates: Option<&[usize]> = None;
        for list in lists.into_iter().flatten() {
            let list = list.map(Vec::as_slice).unwrap_or(&[]);
            if list.is_empty() {
                return Vec::new();
            }
            if candidates.is_none_or(|c| list.len() < c.len()) {
                candidates = Some(list);
            }
        }
        let keep = |t: &Triple| {
            s.is_none_or(|s| &t.subject == s) && p.is_none_or(|p| &t.predicate == p) && o.is_none_or(|o| &t.object == o)
        };
        match candidates {
            None => self.triples.iter().collect(),
            Some(idx) => idx.iter().map(|&i| &self.triples[i]).filter(|t| keep(t)).collect(),
        }
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(Some(s), Some(p), None).into_iter().map(|t| &t.object)
    }

    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(None, Some(p), Some(o)).into_iter().map(|t| &t.subject)
    }

    pub fn object(&self, s: &Term, p: &Iri) -> Option<&Term> {
        self.objects(s, p).next()
    }

    /// Members of the RDF list starting at `head`, or `None` if it is not a
    /// well-formed list (missing first/rest, branching, cycles).
    pub fn list(&self, head: &Term) -> Option<Vec<Term>> {
        let first = vocab::iri(rdf::FIRST);
        let rest = vocab::iri(rdf::REST);
        let nil = vocab::term(rdf::NIL);
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut node = head.clone();
        while node != nil {
            if !seen.insert(node.clone()) {
                return None;
            }
            let mut firsts = self.objects(&node, &first);
            let item = firsts.next()?.clone();
            if firsts.next().is_some() {
                return None;
            }
            let mut rests = self.objects(&node, &rest);
            let next = rests.next()?.clone();
            if rests.next().is_some() {
                return None;
            }
            out.push(item);
            node = next;
        }
        Some(out)
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    /// Later bindings replace earlier ones.
    pub fn set_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    pub fn blank_nodes(&self) -> IndexSet<BlankNode> {
        let mut out = IndexSet::new();
        for t in &self.triples {
            for term in [&t.subject, &t.object] {
                if let Term::BlankNode(b) = term {
                    out.insert(b.clone());
                }
            }
        }
        out
    }

    /// Adds every triple of `other`, renaming its blank nodes where their
    /// labels are already used here. Prefix bindings of `other` win.
    pub fn merge(&mut self, other: &Graph) {
        let mut used: HashSet<String> = self.blank_nodes().into_iter().map(|b| b.label().to_string()).collect();
        let mut renames: HashMap<BlankNode, BlankNode> = HashMap::new();
        let mut counter = 0usize;
        let theirs = other.blank_nodes();
        let their_labels: HashSet<&str> = theirs.iter().map(|b| b.label()).collect();
        for b in &theirs {
            if used.contains(b.label()) {
                let fresh = loop {
                    counter += 1;
                    let candidate = format!("{}_{}", b.label(), counter);
                    if !used.contains(&candidate) && !their_labels.contains(candidate.as_str()) {
                        break candidate;
                    }
                };
                used.insert(fresh.clone());
                renames.insert(b.clone(), BlankNode::new(fresh).expect("derived label"));
            } else {
                used.insert(b.label().to_string());
            }
        }
        let rename = |t: &Term| match t {
            Term::BlankNode(b) => renames
                .get(b)
                .map(|r| Term::BlankNode(r.clone()))
                .unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        };
        for t in other.iter() {
            self.insert(Triple {
                subject: rename(&t.subject),
                predicate: t.predicate.clone(),
                object: rename(&t.object),
            });
        }
        for (p, ns) in other.prefixes() {
            self.set_prefix(p.clone(), ns.clone());
        }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Triple) -> bool) {
        let old = std::mem::take(&mut self.triples);
        self.by_subject.clear();
        self.by_predicate.clear();
        self.by_object.clear();
        for t in old {
            if keep(&t) {
                self.insert(t);
            }
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}
