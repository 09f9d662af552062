//! Local names of the AML ontology vocabulary. Full IRIs are the configured
//! `aml_namespace` followed by one of these names.

use amlshacl_caex::CaexKind;

pub const CAEX_FILE: &str = "CAEXFile";

pub const HAS_INSTANCE_HIERARCHY: &str = "hasInstanceHierarchy";
pub const HAS_ROLE_CLASS_LIB: &str = "hasRoleClassLib";
pub const HAS_INTERFACE_CLASS_LIB: &str = "hasInterfaceClassLib";
pub const HAS_SYSTEM_UNIT_CLASS_LIB: &str = "hasSystemUnitClassLib";
pub const HAS_ROLE_CLASS: &str = "hasRoleClass";
pub const HAS_INTERFACE_CLASS: &str = "hasInterfaceClass";
pub const HAS_SYSTEM_UNIT_CLASS: &str = "hasSystemUnitClass";
pub const HAS_INTERNAL_ELEMENT: &str = "hasInternalElement";
pub const HAS_EXTERNAL_INTERFACE: &str = "hasExternalInterface";
pub const HAS_INTERNAL_LINK: &str = "hasInternalLink";
pub const HAS_ATTRIBUTE: &str = "hasAttribute";
pub const HAS_ROLE_REQUIREMENTS: &str = "hasRoleRequirements";
pub const HAS_SUPPORTED_ROLE_CLASS: &str = "hasSupportedRoleClass";
pub const REF_PARTNER_SIDE_A: &str = "refPartnerSideA";
pub const REF_PARTNER_SIDE_B: &str = "refPartnerSideB";

pub const HAS_NAME: &str = "hasName";
pub const HAS_ID: &str = "hasID";
pub const HAS_VALUE: &str = "hasValue";
pub const HAS_ATTRIBUTE_DATA_TYPE: &str = "hasAttributeDataType";
pub const HAS_UNIT: &str = "hasUnit";
pub const HAS_DESCRIPTION: &str = "hasDescription";
pub const REF_BASE_CLASS_PATH: &str = "refBaseClassPath";
pub const REF_BASE_ROLE_CLASS_PATH: &str = "refBaseRoleClassPath";
pub const REF_ROLE_CLASS_PATH: &str = "refRoleClassPath";
pub const REF_BASE_SYSTEM_UNIT_PATH: &str = "refBaseSystemUnitPath";

/// Meta-model class for a CAEX kind; `None` for opaque elements.
pub fn class_for(kind: &CaexKind) -> Option<&'static str> {
    Some(match kind {
        CaexKind::CaexFile => CAEX_FILE,
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
        CaexKind::Other(_) => return None,
    })
}

/// Containment predicate linking a parent to a child of `kind`.
pub fn containment_for(kind: &CaexKind) -> Option<&'static str> {
    Some(match kind {
        CaexKind::InstanceHierarchy => HAS_INSTANCE_HIERARCHY,
        CaexKind::RoleClassLib => HAS_ROLE_CLASS_LIB,
        CaexKind::InterfaceClassLib => HAS_INTERFACE_CLASS_LIB,
        CaexKind::SystemUnitClassLib => HAS_SYSTEM_UNIT_CLASS_LIB,
        CaexKind::RoleClass => HAS_ROLE_CLASS,
        CaexKind::InterfaceClass => HAS_INTERFACE_CLASS,
        CaexKind::SystemUnitClass => HAS_SYSTEM_UNIT_CLASS,
        CaexKind::InternalElement => HAS_INTERNAL_ELEMENT,
        CaexKind::ExternalInterface => HAS_EXTERNAL_INTERFACE,
        CaexKind::InternalLink => HAS_INTERNAL_LINK,
        CaexKind::Attribute => HAS_ATTRIBUTE,
        CaexKind::RoleRequirements => HAS_ROLE_REQUIREMENTS,
        CaexKind::SupportedRoleClass => HAS_SUPPORTED_ROLE_CLASS,
        CaexKind::CaexFile | CaexKind::Other(_) => return None,
    })
}

/// Literal predicate carrying the element's class reference.
pub fn class_reference_for(kind: &CaexKind) -> Option<&'static str> {
    Some(match kind {
        CaexKind::RoleClass | CaexKind::InterfaceClass | CaexKind::SystemUnitClass | CaexKind::ExternalInterface => {
            REF_BASE_CLASS_PATH
        }
        CaexKind::RoleRequirements => REF_BASE_ROLE_CLASS_PATH,
        CaexKind::SupportedRoleClass => REF_ROLE_CLASS_PATH,
        CaexKind::InternalElement => REF_BASE_SYSTEM_UNIT_PATH,
        _ => return None,
    })
}
