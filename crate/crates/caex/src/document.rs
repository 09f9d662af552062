use std::collections::{HashMap, HashSet};
use std::fmt;

/// Handle to an element inside an [`AmlDocument`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub(crate) usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LibraryKind {
    RoleClassLib,
    InterfaceClassLib,
    SystemUnitClassLib,
}

impl LibraryKind {
    pub fn class_kind(self) -> CaexKind {
        match self {
            LibraryKind::RoleClassLib => CaexKind::RoleClass,
            LibraryKind::InterfaceClassLib => CaexKind::InterfaceClass,
            LibraryKind::SystemUnitClassLib => CaexKind::SystemUnitClass,
        }
    }
}

/// What a CAEX element is. Tags recognised outside their schema context,
/// and every tag the model does not interpret (`Value`, `Description`,
/// vendor extensions, ...), are kept as [`CaexKind::Other`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CaexKind {
    CaexFile,
    InstanceHierarchy,
    InternalElement,
    ExternalInterface,
    InternalLink,
    Attribute,
    RoleRequirements,
    SupportedRoleClass,
    RoleClassLib,
    InterfaceClassLib,
    SystemUnitClassLib,
    RoleClass,
    InterfaceClass,
    SystemUnitClass,
    Other(String),
}

impl CaexKind {
    pub fn library(&self) -> Option<LibraryKind> {
        match self {
            CaexKind::RoleClassLib => Some(LibraryKind::RoleClassLib),
            CaexKind::InterfaceClassLib => Some(LibraryKind::InterfaceClassLib),
            CaexKind::SystemUnitClassLib => Some(LibraryKind::SystemUnitClassLib),
            _ => None,
        }
    }

    pub fn is_class(&self) -> bool {
        matches!(
            self,
            CaexKind::RoleClass | CaexKind::InterfaceClass | CaexKind::SystemUnitClass
        )
    }

    /// The library kind a class of this kind lives in.
    pub fn class_library(&self) -> Option<LibraryKind> {
        match self {
            CaexKind::RoleClass => Some(LibraryKind::RoleClassLib),
            CaexKind::InterfaceClass => Some(LibraryKind::InterfaceClassLib),
            CaexKind::SystemUnitClass => Some(LibraryKind::SystemUnitClassLib),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            CaexKind::CaexFile => "CAEXFile",
            CaexKind::InstanceHierarchy => "InstanceHierarchy",
            CaexKind::InternalElement => "InternalElement",
            CaexKind::ExternalInterface => "ExternalInterface",
            CaexKind::InternalLink => "InternalLink",
            CaexKind::Attribute => "Attribute",
            CaexKind::RoleRequirements => "RoleRequirements",
            CaexKind::SupportedRoleClass => "SupportedRoleClass",
            CaexKind::RoleClassLib => "RoleClassLib",
            CaexKind::InterfaceClassLib => "InterfaceClassLib",
            CaexKind::SystemUnitClassLib => "SystemUnitClassLib",
            CaexKind::RoleClass => "RoleClass",
            CaexKind::InterfaceClass => "InterfaceClass",
            CaexKind::SystemUnitClass => "SystemUnitClass",
            CaexKind::Other(tag) => tag,
        }
    }
}

impl fmt::Display for CaexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One XML element of a CAEX file.
///
/// `ref_base_class_path` holds whichever class reference the schema defines
/// for the kind: `RefBaseClassPath` (classes, interfaces),
/// `RefBaseSystemUnitPath` (internal elements), `RefBaseRoleClassPath`
/// (role requirements) or `RefRoleClassPath` (supported role classes).
#[derive(Debug, Clone)]
pub struct CaexElement {
    pub kind: CaexKind,
    pub name: Option<String>,
    pub id: Option<String>,
    pub ref_base_class_path: Option<String>,
    pub ref_partner_side_a: Option<String>,
    pub ref_partner_side_b: Option<String>,
    pub attribute_value: Option<String>,
    pub attribute_data_type: Option<String>,
    pub unit: Option<String>,
    pub description: Option<String>,
    /// Text content of opaque elements.
    pub text: Option<String>,
    /// Every XML attribute as written, in document order.
    pub xml_attributes: Vec<(String, String)>,
    pub line: u32,
    pub parent: Option<ElementId>,
    pub children: Vec<ElementId>,
}

impl CaexElement {
    pub(crate) fn new(kind: CaexKind, line: u32, parent: Option<ElementId>) -> Self {
        CaexElement {
            kind,
            name: None,
            id: None,
            ref_base_class_path: None,
            ref_partner_side_a: None,
            ref_partner_side_b: None,
            attribute_value: None,
            attribute_data_type: None,
            unit: None,
            description: None,
            text: None,
            xml_attributes: Vec::new(),
            line,
            parent,
            children: Vec::new(),
        }
    }

    pub fn xml_attribute(&self, name: &str) -> Option<&str> {
        self.xml_attributes
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaexWarning {
    CyclicInheritance { class_path: String, repeated: String },
    UnresolvedBaseClass { class_path: String, base_path: String },
}

impl fmt::Display for CaexWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaexWarning::CyclicInheritance { class_path, repeated } => {
                write!(f, "cyclic inheritance from {class_path}: {repeated} repeats")
            }
            CaexWarning::UnresolvedBaseClass { class_path, base_path } => {
                write!(f, "{class_path}: base class {base_path} not found")
            }
        }
    }
}

/// Inheritance chain of a class, most specific first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ancestry {
    pub chain: Vec<ElementId>,
    pub warnings: Vec<CaexWarning>,
}

/// A parsed CAEX file. Immutable once built; share it freely.
#[derive(Debug, Clone)]
pub struct AmlDocument {
    pub file_name: String,
    pub schema_version: Option<String>,
    pub(crate) elements: Vec<CaexElement>,
    pub(crate) root: ElementId,
    pub instance_hierarchies: Vec<ElementId>,
    pub role_class_libs: Vec<ElementId>,
    pub interface_class_libs: Vec<ElementId>,
    pub system_unit_class_libs: Vec<ElementId>,
    pub(crate) id_index: HashMap<String, ElementId>,
}

impl AmlDocument {
    pub fn root(&self) -> ElementId {
        self.root
    }

    pub fn element(&self, id: ElementId) -> &CaexElement {
        &self.elements[id.0]
    }

    /// Number of XML elements in the document, opaque ones included.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementId, &CaexElement)> + '_ {
        self.elements.iter().enumerate().map(|(i, e)| (ElementId(i), e))
    }

    pub fn count(&self, kind: &CaexKind) -> usize {
        self.elements.iter().filter(|e| &e.kind == kind).count()
    }

    pub fn children<'a>(&'a self, id: ElementId) -> impl Iterator<Item = (ElementId, &'a CaexElement)> + 'a {
        self.elements[id.0]
            .children
            .iter()
            .map(move |&c| (c, &self.elements[c.0]))
    }

    pub fn children_of_kind<'a>(
        &'a self,
        id: ElementId,
        kind: &'a CaexKind,
    ) -> impl Iterator<Item = (ElementId, &'a CaexElement)> + 'a {
        self.children(id).filter(move |(_, e)| &e.kind == kind)
    }

    pub fn by_id(&self, id: &str) -> Option<ElementId> {
        self.id_index.get(id).copied()
    }

    pub fn id_index(&self) -> &HashMap<String, ElementId> {
        &self.id_index
    }

    pub fn libraries(&self, kind: LibraryKind) -> &[ElementId] {
        match kind {
            LibraryKind::RoleClassLib => &self.role_class_libs,
            LibraryKind::InterfaceClassLib => &self.interface_class_libs,
            LibraryKind::SystemUnitClassLib => &self.system_unit_class_libs,
        }
    }

    pub fn library_named(&self, kind: LibraryKind, name: &str) -> Option<ElementId> {
        self.libraries(kind)
            .iter()
            .copied()
            .find(|&l| self.element(l).name.as_deref() == Some(name))
    }

    /// Resolve a `/`-separated CAEX class path whose first segment names a
    /// library. Libraries are searched role, interface, then system unit.
    pub fn resolve_class_path(&self, path: &str) -> Option<ElementId> {
        [
            LibraryKind::RoleClassLib,
            LibraryKind::InterfaceClassLib,
            LibraryKind::SystemUnitClassLib,
        ]
        .into_iter()
        .find_map(|k| self.resolve_class_path_in(k, path))
    }

    /// Like [`resolve_class_path`](Self::resolve_class_path) restricted to one
    /// library kind.
    pub fn resolve_class_path_in(&self, kind: LibraryKind, path: &str) -> Option<ElementId> {
        let mut segments = split_path(path);
        let lib_name = segments.next()?;
        let class_kind = kind.class_kind();
        let mut node = self.library_named(kind, lib_name)?;
        let mut walked = false;
        for seg in segments {
            node = self
                .children_of_kind(node, &class_kind)
                .find(|(_, e)| e.name.as_deref() == Some(seg))
                .map(|(id, _)| id)?;
            walked = true;
        }
        walked.then_some(node)
    }

    /// `Library/Class/Nested` path of a class element.
    pub fn class_path(&self, class: ElementId) -> Option<String> {
        let mut segments = Vec::new();
        let mut cur = Some(class);
        while let Some(id) = cur {
            let e = self.element(id);
            if !(e.kind.is_class() || e.kind.library().is_some()) {
                return None;
            }
            segments.push(e.name.clone().unwrap_or_default());
            if e.kind.library().is_some() {
                segments.reverse();
                return Some(segments.join("/"));
            }
            cur = e.parent;
        }
        None
    }

    /// Every class in every library, in document order.
    pub fn classes(&self) -> impl Iterator<Item = (ElementId, &CaexElement)> + '_ {
        self.iter().filter(|(_, e)| e.kind.is_class())
    }

    /// The inheritance chain starting at `class`, following each class's
    /// `RefBaseClassPath`. Cycles are cut at the first repeat.
    pub fn class_ancestry(&self, class: ElementId) -> Ancestry {
        let mut chain = vec![class];
        let mut seen = HashSet::from([class]);
        let mut warnings = Vec::new();
        let start_path = self.class_path(class).unwrap_or_default();
        let mut cur = class;
        loop {
            let e = self.element(cur);
            let Some(base) = e.ref_base_class_path.as_deref() else {
                break;
            };
            let resolved = e
                .kind
                .class_library()
                .and_then(|k| self.resolve_class_path_in(k, base))
                .or_else(|| self.resolve_class_path(base));
            let Some(next) = resolved else {
                warnings.push(CaexWarning::UnresolvedBaseClass {
                    class_path: self.class_path(cur).unwrap_or_default(),
                    base_path: base.to_string(),
                });
                break;
            };
            if !seen.insert(next) {
                warnings.push(CaexWarning::CyclicInheritance {
                    class_path: start_path,
                    repeated: self.class_path(next).unwrap_or_default(),
                });
                break;
            }
            chain.push(next);
            cur = next;
        }
        Ancestry { chain, warnings }
    }

    /// Resolve an `InternalLink` partner reference: first as an interface
    /// ID, then as `Owner:Interface` where the owner is given by ID or by a
    /// unique element name.
    pub fn resolve_interface_ref(&self, reference: &str) -> Option<ElementId> {
        let reference = reference.trim();
        if let Some(id) = self.by_id(reference) {
            if self.element(id).kind == CaexKind::ExternalInterface {
                return Some(id);
            }
        }
        let (owner, iface) = reference.rsplit_once(':')?;
        let owner_id = match self.by_id(owner) {
            Some(id) => id,
            None => {
                let mut named = self.iter().filter(|(_, e)| {
                    e.name.as_deref() == Some(owner)
                        && matches!(
                            e.kind,
                            CaexKind::InternalElement | CaexKind::SystemUnitClass | CaexKind::ExternalInterface
                        )
                });
                let (first, _) = named.next()?;
                if named.next().is_some() {
                    return None;
                }
                first
            }
        };
        self.children_of_kind(owner_id, &CaexKind::ExternalInterface)
            .find(|(_, e)| e.name.as_deref() == Some(iface))
            .map(|(id, _)| id)
    }

    /// The class a role reference or interface points at, if it resolves.
    pub fn referenced_class(&self, element: ElementId) -> Option<ElementId> {
        let e = self.element(element);
        let path = e.ref_base_class_path.as_deref()?;
        let kind = match e.kind {
            CaexKind::ExternalInterface => LibraryKind::InterfaceClassLib,
            CaexKind::RoleRequirements | CaexKind::SupportedRoleClass => LibraryKind::RoleClassLib,
            CaexKind::InternalElement => LibraryKind::SystemUnitClassLib,
            ref k => k.class_library()?,
        };
        self.resolve_class_path_in(kind, path)
    }

    /// Position of `id` among its parent's children of the same kind.
    pub fn sibling_index(&self, id: ElementId) -> usize {
        let e = self.element(id);
        match e.parent {
            None => 0,
            Some(p) => self
                .children_of_kind(p, &e.kind)
                .position(|(c, _)| c == id)
                .unwrap_or(0),
        }
    }

    /// Copy the libraries of `other` into this document. Libraries whose kind
    /// and name already exist here are skipped and their names returned.
    pub fn import_libraries(&mut self, other: &AmlDocument) -> Result<Vec<String>, crate::CaexError> {
        let mut skipped = Vec::new();
        for kind in [
            LibraryKind::RoleClassLib,
            LibraryKind::InterfaceClassLib,
            LibraryKind::SystemUnitClassLib,
        ] {
            for &lib in other.libraries(kind) {
                let name = other.element(lib).name.clone().unwrap_or_default();
                if self.library_named(kind, &name).is_some() {
                    skipped.push(name);
                    continue;
                }
                let copied = self.copy_subtree(other, lib, Some(self.root))?;
                self.elements[self.root.0].children.push(copied);
                match kind {
                    LibraryKind::RoleClassLib => self.role_class_libs.push(copied),
                    LibraryKind::InterfaceClassLib => self.interface_class_libs.push(copied),
                    LibraryKind::SystemUnitClassLib => self.system_unit_class_libs.push(copied),
                }
            }
        }
        Ok(skipped)
    }

    fn copy_subtree(
        &mut self,
        other: &AmlDocument,
        node: ElementId,
        parent: Option<ElementId>,
    ) -> Result<ElementId, crate::CaexError> {
        let mut e = other.element(node).clone();
        e.parent = parent;
        e.children = Vec::new();
        let new_id = ElementId(self.elements.len());
        if let Some(xml_id) = &e.id {
            if let Some(&existing) = self.id_index.get(xml_id) {
                return Err(crate::CaexError::DuplicateId {
                    id: xml_id.clone(),
                    first_line: self.element(existing).line,
                    second_line: e.line,
                });
            }
            self.id_index.insert(xml_id.clone(), new_id);
        }
        self.elements.push(e);
        for &child in &other.element(node).children {
            let c = self.copy_subtree(other, child, Some(new_id))?;
            self.elements[new_id.0].children.push(c);
        }
        Ok(new_id)
    }
}

fn split_path(path: &str) -> impl Iterator<Item = &str> {
    path.trim().split('/').filter(|s| !s.is_empty())
}
