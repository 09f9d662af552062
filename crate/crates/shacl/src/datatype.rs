//! Lexical well-formedness of literals for the XSD datatypes the Datatype
//! component knows. Unknown datatypes are accepted as-is.

use std::sync::OnceLock;

use amlshacl_rdf::vocab::{rdf, xsd};
use amlshacl_rdf::Literal;
use regex::Regex;

const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

fn re(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("static pattern"))
}

fn integer_in(lexical: &str, min: i128, max: i128) -> bool {
    static INT: OnceLock<Regex> = OnceLock::new();
    if !re(&INT, r"^[+-]?[0-9]+$").is_match(lexical) {
        return false;
    }
    let digits = lexical.trim_start_matches(['+', '-']).trim_start_matches('0');
    if digits.len() > 30 {
        return false;
    }
    match lexical.parse::<i128>() {
        Ok(v) => v >= min && v <= max,
        Err(_) => false,
    }
}

/// Whether `lit` is a well-formed literal of its own datatype.
pub fn is_well_formed(lit: &Literal) -> bool {
    static DECIMAL: OnceLock<Regex> = OnceLock::new();
    static DOUBLE: OnceLock<Regex> = OnceLock::new();
    static DATE: OnceLock<Regex> = OnceLock::new();
    static DATE_TIME: OnceLock<Regex> = OnceLock::new();
    static TIME: OnceLock<Regex> = OnceLock::new();

    let dt = lit.datatype().as_str();
    let v = lit.lexical();
    if dt == rdf::LANG_STRING {
        return lit.language().is_some();
    }
    if lit.language().is_some() {
        return false;
    }
    let Some(local) = dt.strip_prefix(XSD) else {
        return true;
    };
    let unbounded = i128::MAX;
    match local {
        "string" | "normalizedString" | "token" | "anyURI" => true,
        "boolean" => matches!(v, "true" | "false" | "1" | "0"),
        "integer" => integer_in(v, -unbounded, unbounded),
        "long" => integer_in(v, i64::MIN as i128, i64::MAX as i128),
        "int" => integer_in(v, i32::MIN as i128, i32::MAX as i128),
        "short" => integer_in(v, i16::MIN as i128, i16::MAX as i128),
        "byte" => integer_in(v, i8::MIN as i128, i8::MAX as i128),
        "nonNegativeInteger" => integer_in(v, 0, unbounded),
        "positiveInteger" => integer_in(v, 1, unbounded),
        "nonPositiveInteger" => integer_in(v, -unbounded, 0),
        "negativeInteger" => integer_in(v, -unbounded, -1),
        "unsignedLong" => integer_in(v, 0, u64::MAX as i128),
        "unsignedInt" => integer_in(v, 0, u32::MAX as i128),
        "unsignedShort" => integer_in(v, 0, u16::MAX as i128),
        "unsignedByte" => integer_in(v, 0, u8::MAX as i128),
        "decimal" => re(&DECIMAL, r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)$").is_match(v),
        "double" | "float" => re(
            &DOUBLE,
            r"^([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?|[+-]?INF|NaN)$",
        )
        .is_match(v),
        "date" => re(&DATE, r"^-?[0-9]{4,}-[0-9]{2}-[0-9]{2}(Z|[+-][0-9]{2}:[0-9]{2})?$").is_match(v),
        "dateTime" => re(
            &DATE_TIME,
            r"^-?[0-9]{4,}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:[0-9]{2}(\.[0-9]+)?(Z|[+-][0-9]{2}:[0-9]{2})?$",
        )
        .is_match(v),
        "time" => re(
            &TIME,
            r"^[0-9]{2}:[0-9]{2}:[0-9]{2}(\.[0-9]+)?(Z|[+-][0-9]{2}:[0-9]{2})?$",
        )
        .is_match(v),
        _ => true,
    }
}

/// Type check for sh:datatype: same datatype IRI and well-formed.
pub fn matches_datatype(lit: &Literal, datatype: &str) -> bool {
    if datatype == xsd::STRING && lit.language().is_some() {
        return false;
    }
    lit.datatype().as_str() == datatype && is_well_formed(lit)
}
