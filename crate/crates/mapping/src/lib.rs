//! Maps an [`AmlDocument`] onto an RDF graph that mirrors the CAEX
//! structure under the `aml:` vocabulary.
//!
//! Every CAEX element becomes a node typed by its meta-model class and
//! linked to its parent by a containment predicate (`aml:hasInternalElement`,
//! `aml:hasExternalInterface`, ...). Library classes become `owl:Class`es
//! with `rdfs:subClassOf` to their direct base; instance elements are typed
//! with the most specific class they reference. `InternalLink` nodes point
//! at their two interface nodes through `aml:refPartnerSideA/B`, keeping
//! the direction of the source file.
//!
//! IRIs are minted by [`mint_iri`]; [`iri_scheme_doc`] describes the scheme
//! in prose for prompts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use amlshacl_caex::{AmlDocument, CaexKind, CaexWarning, ElementId};
use amlshacl_rdf::vocab::{owl, rdf, rdfs};
use amlshacl_rdf::{Graph, Iri, Literal, Term};
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

pub mod vocab;

pub const DEFAULT_AML_NAMESPACE: &str = "https://aml-shacl.example/aml#";
pub const DEFAULT_BASE_IRI: &str = "https://aml-shacl.example/model/";
pub const DEFAULT_LIB_NAMESPACE: &str = "https://aml-shacl.example/lib/";

/// Condensed description of the vocabulary, used as prompt context.
pub const ONTOLOGY_CONTEXT: &str = include_str!("../assets/ontology_context.md");

/// Everything except RFC 3986 unreserved characters gets encoded, so a
/// minted segment never contains `/`, `#` or `:`.
const SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LibNamespacePolicy {
    /// `lib_namespace` + encoded `Library/Class/Nested` path.
    #[default]
    Path,
    /// `lib_namespace` + encoded class ID where the class has one, else the
    /// path.
    Id,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingConfig {
    pub base_iri: Iri,
    pub aml_namespace: Iri,
    pub lib_namespace: Iri,
    pub lib_namespace_policy: LibNamespacePolicy,
}

impl Default for MappingConfig {
    fn default() -> Self {
        Self {
            base_iri: Iri::new_unchecked(DEFAULT_BASE_IRI),
            aml_namespace: Iri::new_unchecked(DEFAULT_AML_NAMESPACE),
            lib_namespace: Iri::new_unchecked(DEFAULT_LIB_NAMESPACE),
            lib_namespace_policy: LibNamespacePolicy::Path,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error("{field} must be an absolute IRI ending in '/' or '#', got <{iri}>")]
    BadNamespace { field: &'static str, iri: String },
}

impl MappingConfig {
    pub fn validate(&self) -> Result<(), MappingError> {
        for (field, iri) in [
            ("base_iri", &self.base_iri),
            ("aml_namespace", &self.aml_namespace),
            ("lib_namespace", &self.lib_namespace),
        ] {
            let s = iri.as_str();
            if Iri::new(s).is_err() || !(s.ends_with('/') || s.ends_with('#')) {
                return Err(MappingError::BadNamespace {
                    field,
                    iri: s.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `aml_namespace` + `local`.
    pub fn aml(&self, local: &str) -> Iri {
        Iri::new_unchecked(format!("{}{local}", self.aml_namespace.as_str()))
    }
}

fn encode(segment: &str) -> String {
    utf8_percent_encode(segment, SEGMENT).to_string()
}

fn segment_for(doc: &AmlDocument, id: ElementId) -> String {
    let e = doc.element(id);
    match e.name.as_deref() {
        Some(name) if !name.is_empty() => encode(name),
        _ => format!("{}_{}", e.kind, doc.sibling_index(id)),
    }
}

/// Name segments from the outermost non-file ancestor down to `id`.
fn path_segments(doc: &AmlDocument, id: ElementId) -> Vec<String> {
    let mut segments = Vec::new();
    let mut cur = Some(id);
    while let Some(c) = cur {
        let e = doc.element(c);
        if e.kind == CaexKind::CaexFile {
            break;
        }
        segments.push(segment_for(doc, c));
        cur = e.parent;
    }
    segments.reverse();
    segments
}

/// IRI for a CAEX element.
///
/// The file node is `base_iri` + file name. Classes and libraries live under
/// `lib_namespace` (by path, or by ID under [`LibNamespacePolicy::Id`]).
/// Everything else is `base_iri` + encoded ID, or `base_iri` + the encoded
/// name path joined with `/` when the element has no ID. Nameless segments
/// are written `Kind_n`, `n` counting same-kind siblings.
pub fn mint_iri(doc: &AmlDocument, id: ElementId, cfg: &MappingConfig) -> Iri {
    let e = doc.element(id);
    if e.kind == CaexKind::CaexFile {
        return Iri::new_unchecked(format!("{}{}", cfg.base_iri.as_str(), encode(&doc.file_name)));
    }
    let is_lib_entity = e.kind.is_class() || e.kind.library().is_some();
    let (ns, by_id) = if is_lib_entity {
        (&cfg.lib_namespace, cfg.lib_namespace_policy == LibNamespacePolicy::Id)
    } else {
        (&cfg.base_iri, true)
    };
    let local = match (&e.id, by_id) {
        (Some(xml_id), true) if !xml_id.is_empty() => encode(xml_id),
        _ => path_segments(doc, id).join("/"),
    };
    Iri::new_unchecked(format!("{}{local}", ns.as_str()))
}

/// Prose description of the IRI scheme for a configuration.
pub fn iri_scheme_doc(cfg: &MappingConfig) -> String {
    format!(
        "Identifiers in the data graph:\n\
         - Vocabulary terms: <{aml}Name>, e.g. aml:hasExternalInterface (prefix aml: <{aml}>).\n\
         - Library classes: <{lib}LibraryName/ClassName/NestedClassName>, each path segment percent-encoded. \
         Example: <{lib}CommunicationInterfaceClassLib/LogicalEndPoint>. Declare a prefix per library, \
         e.g. PREFIX cicl: <{lib}CommunicationInterfaceClassLib/>, and write cicl:LogicalEndPoint.\n\
         - Instances (InternalElement, ExternalInterface, InternalLink, Attribute, ...): <{base}ID> using the \
         percent-encoded CAEX ID; elements without an ID use <{base}Hierarchy/Element/Child> name paths.\n\
         - Instances are typed with rdf:type to the most specific library class they reference \
         (RoleRequirements / SupportedRoleClass / RefBaseSystemUnitPath for elements, RefBaseClassPath for \
         interfaces). Superclasses are reachable through rdfs:subClassOf, so sh:class and sh:targetClass \
         see them.\n\
         - InternalLink nodes carry aml:refPartnerSideA and aml:refPartnerSideB pointing at the two interface \
         nodes, in the direction written in the AML file. There is no inverse or symmetric link predicate.\n",
        aml = cfg.aml_namespace.as_str(),
        lib = cfg.lib_namespace.as_str(),
        base = cfg.base_iri.as_str(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MappingWarning {
    DanglingInterfaceRef { link: Iri, side: char, reference: String },
    UnresolvedClassPath { element: Iri, path: String },
    CyclicInheritance { class: Iri, repeated: String },
    IriCollision { iri: Iri, renamed: Iri },
}

impl fmt::Display for MappingWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingWarning::DanglingInterfaceRef { link, side, reference } => write!(
                f,
                "<{}>: RefPartnerSide{side} {reference:?} does not resolve to an ExternalInterface",
                link.as_str()
            ),
            MappingWarning::UnresolvedClassPath { element, path } => {
                write!(f, "<{}>: class path {path:?} does not resolve", element.as_str())
            }
            MappingWarning::CyclicInheritance { class, repeated } => {
                write!(f, "<{}>: inheritance cycle through {repeated:?}", class.as_str())
            }
            MappingWarning::IriCollision { iri, renamed } => write!(
                f,
                "<{}> minted twice; second element renamed to <{}>",
                iri.as_str(),
                renamed.as_str()
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingReport {
    /// Mapped nodes per CAEX kind name.
    pub counts: BTreeMap<String, usize>,
    pub warnings: Vec<MappingWarning>,
}

fn in_instance_hierarchy(doc: &AmlDocument, id: ElementId) -> bool {
    let mut cur = doc.element(id).parent;
    while let Some(c) = cur {
        if doc.element(c).kind == CaexKind::InstanceHierarchy {
            return true;
        }
        cur = doc.element(c).parent;
    }
    false
}

struct Mapper<'a> {
    doc: &'a AmlDocument,
    cfg: &'a MappingConfig,
    iris: HashMap<ElementId, Iri>,
    graph: Graph,
    report: MappingReport,
}

impl Mapper<'_> {
    fn iri(&self, id: ElementId) -> Term {
        Term::Iri(self.iris[&id].clone())
    }

    fn add(&mut self, s: ElementId, p: &str, o: impl Into<Term>) {
        let s = self.iri(s);
        let p = self.cfg.aml(p);
        self.graph.add(s, p, o);
    }

    fn assign_iris(&mut self) {
        let mut taken: HashMap<Iri, ElementId> = HashMap::new();
        for (id, e) in self.doc.iter() {
            if vocab::class_for(&e.kind).is_none() {
                continue;
            }
            let minted = mint_iri(self.doc, id, self.cfg);
            let mut iri = minted.clone();
            let mut n = 1;
            while taken.contains_key(&iri) {
                n += 1;
                iri = Iri::new_unchecked(format!("{}~{n}", minted.as_str()));
            }
            if iri != minted {
                self.report.warnings.push(MappingWarning::IriCollision {
                    iri: minted,
                    renamed: iri.clone(),
                });
            }
            taken.insert(iri.clone(), id);
            self.iris.insert(id, iri);
        }
    }

    fn element(&mut self, id: ElementId) {
        let doc = self.doc;
        let e = doc.element(id);
        let Some(class) = vocab::class_for(&e.kind) else {
            return;
        };
        *self.report.counts.entry(e.kind.to_string()).or_default() += 1;
        let subject = self.iri(id);
        let ty = Iri::new_unchecked(rdf::TYPE);
        self.graph.add(subject.clone(), ty.clone(), self.cfg.aml(class));

        if let (Some(parent), Some(pred)) = (e.parent, vocab::containment_for(&e.kind)) {
            if self.iris.contains_key(&parent) {
                self.add(parent, pred, subject.clone());
            }
        }
        let name = if e.kind == CaexKind::CaexFile {
            Some(doc.file_name.as_str())
        } else {
            e.name.as_deref()
        };
        if let Some(name) = name {
            self.add(id, vocab::HAS_NAME, Literal::string(name));
        }
        if let Some(xml_id) = &e.id {
            self.add(id, vocab::HAS_ID, Literal::string(xml_id.as_str()));
        }
        if let Some(d) = &e.description {
            self.add(id, vocab::HAS_DESCRIPTION, Literal::string(d.as_str()));
        }
        if let (Some(path), Some(pred)) = (&e.ref_base_class_path, vocab::class_reference_for(&e.kind)) {
            self.add(id, pred, Literal::string(path.as_str()));
        }

        match &e.kind {
            CaexKind::Attribute => {
                if let Some(v) = &e.attribute_value {
                    self.add(id, vocab::HAS_VALUE, Literal::string(v.as_str()));
                }
                if let Some(t) = &e.attribute_data_type {
                    self.add(id, vocab::HAS_ATTRIBUTE_DATA_TYPE, Literal::string(t.as_str()));
                }
                if let Some(u) = &e.unit {
                    self.add(id, vocab::HAS_UNIT, Literal::string(u.as_str()));
                }
            }
            CaexKind::InternalLink => {
                for (side, reference, pred) in [
                    ('A', &e.ref_partner_side_a, vocab::REF_PARTNER_SIDE_A),
                    ('B', &e.ref_partner_side_b, vocab::REF_PARTNER_SIDE_B),
                ] {
                    let Some(reference) = reference else { continue };
                    match doc.resolve_interface_ref(reference) {
                        Some(target) => {
                            let o = self.iri(target);
                            self.add(id, pred, o);
                        }
                        None => self.report.warnings.push(MappingWarning::DanglingInterfaceRef {
                            link: self.iris[&id].clone(),
                            side,
                            reference: reference.clone(),
                        }),
                    }
                }
            }
            k if k.is_class() => self.class(id),
            _ => {}
        }

        if in_instance_hierarchy(doc, id) {
            self.instance_types(id);
        }
    }

    fn class(&mut self, id: ElementId) {
        let subject = self.iri(id);
        self.graph.add(
            subject.clone(),
            Iri::new_unchecked(rdf::TYPE),
            Iri::new_unchecked(owl::CLASS),
        );
        let ancestry = self.doc.class_ancestry(id);
        if let Some(&base) = ancestry.chain.get(1) {
            let o = self.iri(base);
            self.graph.add(subject, Iri::new_unchecked(rdfs::SUB_CLASS_OF), o);
        } else if let Some(path) = &self.doc.element(id).ref_base_class_path {
            self.report.warnings.push(MappingWarning::UnresolvedClassPath {
                element: self.iris[&id].clone(),
                path: path.clone(),
            });
        }
        for w in ancestry.warnings {
            if let CaexWarning::CyclicInheritance { repeated, .. } = w {
                self.report.warnings.push(MappingWarning::CyclicInheritance {
                    class: self.iris[&id].clone(),
                    repeated,
                });
            }
        }
    }

    /// rdf:type edges from an instance element to the library classes it
    /// references.
    fn instance_types(&mut self, id: ElementId) {
        let doc = self.doc;
        let e = doc.element(id);
        let typed_by_self = matches!(e.kind, CaexKind::ExternalInterface | CaexKind::InternalElement);
        let mut sources = Vec::new();
        if typed_by_self && e.ref_base_class_path.is_some() {
            sources.push(id);
        }
        if e.kind == CaexKind::InternalElement {
            sources.extend(
                doc.children(id)
                    .filter(|(_, c)| {
                        matches!(c.kind, CaexKind::RoleRequirements | CaexKind::SupportedRoleClass)
                            && c.ref_base_class_path.is_some()
                    })
                    .map(|(c, _)| c),
            );
        }
        for source in sources {
            match doc.referenced_class(source) {
                Some(class) => {
                    let (s, o) = (self.iri(id), self.iri(class));
                    self.graph.add(s, Iri::new_unchecked(rdf::TYPE), o);
                }
                None => self.report.warnings.push(MappingWarning::UnresolvedClassPath {
                    element: self.iris[&source].clone(),
                    path: doc.element(source).ref_base_class_path.clone().unwrap_or_default(),
                }),
            }
        }
    }
}

/// Map a parsed document. Dangling references and unresolved class paths
/// are reported as warnings and their edges omitted; mapping never fails.
pub fn map_document(doc: &AmlDocument, cfg: &MappingConfig) -> (Graph, MappingReport) {
    let mut m = Mapper {
        doc,
        cfg,
        iris: HashMap::new(),
        graph: Graph::new(),
        report: MappingReport::default(),
    };
    m.assign_iris();
    let ids: Vec<ElementId> = doc.iter().map(|(id, _)| id).collect();
    for id in ids {
        m.element(id);
    }
    m.graph.set_prefix("aml", cfg.aml_namespace.as_str());
    m.graph.set_prefix("model", cfg.base_iri.as_str());
    m.graph.set_prefix("lib", cfg.lib_namespace.as_str());
    (m.graph, m.report)
}
