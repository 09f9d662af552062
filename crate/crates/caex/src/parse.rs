use std::collections::HashMap;

use crate::document::{AmlDocument, CaexElement, CaexKind, ElementId};
use crate::CaexError;

/// Parse a CAEX file (schema 2.15 or 3.0).
pub fn parse_aml(xml: &[u8], file_name: &str) -> Result<AmlDocument, CaexError> {
    let text = std::str::from_utf8(xml).map_err(|e| CaexError::MalformedXml(format!("{file_name}: not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let xml = roxmltree::Document::parse(text).map_err(|e| CaexError::MalformedXml(format!("{file_name}: {e}")))?;
    let root = xml.root_element();
    if root.tag_name().name() != "CAEXFile" {
        return Err(CaexError::NotCaex(format!(
            "{file_name}: root element is <{}>, expected <CAEXFile>",
            root.tag_name().name()
        )));
    }

    let mut builder = Builder {
        xml: &xml,
        elements: Vec::new(),
        id_index: HashMap::new(),
    };
    let root_id = builder.element(root, None)?;

    let mut doc = AmlDocument {
        file_name: file_name.to_string(),
        schema_version: root.attribute("SchemaVersion").map(str::to_string),
        elements: builder.elements,
        root: root_id,
        instance_hierarchies: Vec::new(),
        role_class_libs: Vec::new(),
        interface_class_libs: Vec::new(),
        system_unit_class_libs: Vec::new(),
        id_index: builder.id_index,
    };
    let top: Vec<(ElementId, CaexKind)> = doc.children(root_id).map(|(id, e)| (id, e.kind.clone())).collect();
    for (id, kind) in top {
        match kind {
            CaexKind::InstanceHierarchy => doc.instance_hierarchies.push(id),
            CaexKind::RoleClassLib => doc.role_class_libs.push(id),
            CaexKind::InterfaceClassLib => doc.interface_class_libs.push(id),
            CaexKind::SystemUnitClassLib => doc.system_unit_class_libs.push(id),
            _ => {}
        }
    }
    Ok(doc)
}

/// Kind of a tag given its parent's kind; anything outside its schema
/// context stays opaque.
fn classify(tag: &str, parent: Option<&CaexKind>) -> CaexKind {
    use CaexKind::*;
    let Some(parent) = parent else {
        return if tag == "CAEXFile" {
            CaexFile
        } else {
            Other(tag.to_string())
        };
    };

    match (parent, tag) {
        (CaexFile, "InstanceHierarchy") => InstanceHierarchy,
        (CaexFile, "RoleClassLib") => RoleClassLib,
        (CaexFile, "InterfaceClassLib") => InterfaceClassLib,
        (CaexFile, "SystemUnitClassLib") => SystemUnitClassLib,
        (InstanceHierarchy, "InternalElement") => InternalElement,
        (RoleClassLib | RoleClass, "RoleClass") => RoleClass,
        (InterfaceClassLib | InterfaceClass, "InterfaceClass") => InterfaceClass,
        (SystemUnitClassLib | SystemUnitClass, "SystemUnitClass") => SystemUnitClass,
        (InternalElement | SystemUnitClass, "InternalElement") => InternalElement,
        (InternalElement | SystemUnitClass, "InternalLink") => InternalLink,
        (InternalElement | SystemUnitClass, "RoleRequirements") => RoleRequirements,
        (InternalElement | SystemUnitClass, "SupportedRoleClass") => SupportedRoleClass,
        (
            InternalElement | SystemUnitClass | RoleClass | InterfaceClass | ExternalInterface | RoleRequirements,
            "ExternalInterface",
        ) => ExternalInterface,
        (
            InternalElement | SystemUnitClass | RoleClass | InterfaceClass | ExternalInterface | RoleRequirements
            | Attribute,
            "Attribute",
        ) => Attribute,
        _ => Other(tag.to_string()),
    }
}

struct Builder<'a, 'input> {
    xml: &'a roxmltree::Document<'input>,
    elements: Vec<CaexElement>,
    id_index: HashMap<String, ElementId>,
}

impl Builder<'_, '_> {
    fn line(&self, node: roxmltree::Node) -> u32 {
        self.xml.text_pos_at(node.range().start).row
    }

    fn element(&mut self, node: roxmltree::Node, parent: Option<ElementId>) -> Result<ElementId, CaexError> {
        let parent_kind = parent.map(|p| self.elements[p.0].kind.clone());
        let tag = node.tag_name().name();
        let kind = classify(tag, parent_kind.as_ref());
        let line = self.line(node);
        let mut e = CaexElement::new(kind.clone(), line, parent);
        e.xml_attributes = node
            .attributes()
            .map(|a| (a.name().to_string(), a.value().to_string()))
            .collect();
        if !matches!(kind, CaexKind::Other(_)) {
            e.name = node.attribute("Name").map(str::to_string);
        }
        e.id = node.attribute("ID").map(str::to_string);
        e.ref_base_class_path = match kind {
            CaexKind::RoleClass
            | CaexKind::InterfaceClass
            | CaexKind::SystemUnitClass
            | CaexKind::ExternalInterface => node.attribute("RefBaseClassPath"),
            CaexKind::InternalElement => node.attribute("RefBaseSystemUnitPath"),
            CaexKind::RoleRequirements => node.attribute("RefBaseRoleClassPath"),
            CaexKind::SupportedRoleClass => node.attribute("RefRoleClassPath"),
            _ => None,
        }
        .map(str::to_string);
        match kind {
            CaexKind::InternalLink => {
                let side = |attr: &str| -> Result<String, CaexError> {
                    node.attribute(attr)
                        .map(str::to_string)
                        .ok_or_else(|| CaexError::InvalidCaex {
                            line,
                            message: format!("InternalLink without {attr}"),
                        })
                };
                e.ref_partner_side_a = Some(side("RefPartnerSideA")?);
                e.ref_partner_side_b = Some(side("RefPartnerSideB")?);
            }
            CaexKind::Attribute => {
                e.attribute_data_type = node.attribute("AttributeDataType").map(str::to_string);
                e.unit = node.attribute("Unit").map(str::to_string);
                e.attribute_value = child_text(node, "Value");
            }
            CaexKind::Other(_) => {
                e.text = node
                    .children()
                    .filter(|c| c.is_text())
                    .filter_map(|c| c.text())
                    .map(str::trim)
                    .find(|t| !t.is_empty())
                    .map(str::to_string);
            }
            _ => {}
        }
        if !matches!(kind, CaexKind::Other(_)) {
            e.description = child_text(node, "Description");
        }

        let id = ElementId(self.elements.len());
        if let Some(xml_id) = &e.id {
            if let Some(&first) = self.id_index.get(xml_id) {
                return Err(CaexError::DuplicateId {
                    id: xml_id.clone(),
                    first_line: self.elements[first.0].line,
                    second_line: line,
                });
            }
            self.id_index.insert(xml_id.clone(), id);
        }
        self.elements.push(e);
        for child in node.children().filter(|c| c.is_element()) {
            let c = self.element(child, Some(id))?;
            self.elements[id.0].children.push(c);
        }
        Ok(id)
    }
}

fn child_text(node: roxmltree::Node, tag: &str) -> Option<String> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == tag)
        .map(|c| c.text().unwrap_or("").to_string())
}
