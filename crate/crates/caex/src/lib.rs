//! AutomationML (CAEX) document model.
//!
//! [`parse_aml`] turns a CAEX 2.15 or 3.0 file into an [`AmlDocument`]: an
//! arena of [`CaexElement`]s that mirrors the XML nesting one-to-one, with
//! an ID index and helpers to resolve class paths, inheritance chains and
//! `InternalLink` partner references.
//!
//! Both schema versions' role references (`RoleRequirements` /
//! `RefBaseRoleClassPath` and `SupportedRoleClass` / `RefRoleClassPath`)
//! and both partner reference styles (interface ID, `Owner:Interface`)
//! are understood.

mod document;
mod parse;

pub use document::{AmlDocument, Ancestry, CaexElement, CaexKind, CaexWarning, ElementId, LibraryKind};
pub use parse::parse_aml;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaexError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("not a CAEX file: {0}")]
    NotCaex(String),
    #[error("duplicate ID {id:?} (lines {first_line} and {second_line})")]
    DuplicateId {
        id: String,
        first_line: u32,
        second_line: u32,
    },
    #[error("invalid CAEX at line {line}: {message}")]
    InvalidCaex { line: u32, message: String },
}
