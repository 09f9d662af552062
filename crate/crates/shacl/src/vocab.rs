//! Terms of the SHACL vocabulary used by the engine.

use amlshacl_rdf::Iri;

pub const NS: &str = "http://www.w3.org/ns/shacl#";

macro_rules! sh_terms {
    ($($name:ident = $local:literal;)*) => {
        $(pub const $name: &str = concat!("http://www.w3.org/ns/shacl#", $local);)*
    };
}

sh_terms! {
    NODE_SHAPE = "NodeShape";
    PROPERTY_SHAPE = "PropertyShape";

    TARGET_CLASS = "targetClass";
    TARGET_NODE = "targetNode";
    TARGET_SUBJECTS_OF = "targetSubjectsOf";
    TARGET_OBJECTS_OF = "targetObjectsOf";

    PATH = "path";
    INVERSE_PATH = "inversePath";
    ALTERNATIVE_PATH = "alternativePath";
    ZERO_OR_MORE_PATH = "zeroOrMorePath";
    ONE_OR_MORE_PATH = "oneOrMorePath";
    ZERO_OR_ONE_PATH = "zeroOrOnePath";

    PROPERTY = "property";
    MIN_COUNT = "minCount";
    MAX_COUNT = "maxCount";
    CLASS = "class";
    DATATYPE = "datatype";
    NODE_KIND = "nodeKind";
    HAS_VALUE = "hasValue";
    IN = "in";
    PATTERN = "pattern";
    FLAGS = "flags";
    NODE = "node";
    NOT = "not";
    AND = "and";
    OR = "or";
    QUALIFIED_VALUE_SHAPE = "qualifiedValueShape";
    QUALIFIED_MIN_COUNT = "qualifiedMinCount";
    QUALIFIED_MAX_COUNT = "qualifiedMaxCount";

    SEVERITY = "severity";
    MESSAGE = "message";
    DEACTIVATED = "deactivated";

    BLANK_NODE = "BlankNode";
    IRI = "IRI";
    LITERAL = "Literal";
    BLANK_NODE_OR_IRI = "BlankNodeOrIRI";
    BLANK_NODE_OR_LITERAL = "BlankNodeOrLiteral";
    IRI_OR_LITERAL = "IRIOrLiteral";

    VIOLATION = "Violation";
    WARNING = "Warning";
    INFO = "Info";

    VALIDATION_REPORT = "ValidationReport";
    VALIDATION_RESULT = "ValidationResult";
    CONFORMS = "conforms";
    RESULT = "result";
    FOCUS_NODE = "focusNode";
    RESULT_PATH = "resultPath";
    VALUE = "value";
    SOURCE_SHAPE = "sourceShape";
    SOURCE_CONSTRAINT_COMPONENT = "sourceConstraintComponent";
    RESULT_SEVERITY = "resultSeverity";
    RESULT_MESSAGE = "resultMessage";

    MIN_COUNT_COMPONENT = "MinCountConstraintComponent";
    MAX_COUNT_COMPONENT = "MaxCountConstraintComponent";
    CLASS_COMPONENT = "ClassConstraintComponent";
    DATATYPE_COMPONENT = "DatatypeConstraintComponent";
    NODE_KIND_COMPONENT = "NodeKindConstraintComponent";
    HAS_VALUE_COMPONENT = "HasValueConstraintComponent";
    IN_COMPONENT = "InConstraintComponent";
    PATTERN_COMPONENT = "PatternConstraintComponent";
    NODE_COMPONENT = "NodeConstraintComponent";
    NOT_COMPONENT = "NotConstraintComponent";
    AND_COMPONENT = "AndConstraintComponent";
    OR_COMPONENT = "OrConstraintComponent";
    QUALIFIED_MIN_COUNT_COMPONENT = "QualifiedMinCountConstraintComponent";
    QUALIFIED_MAX_COUNT_COMPONENT = "QualifiedMaxCountConstraintComponent";
}

/// Predicates in the `sh:` namespace that never trigger an
/// UnsupportedComponent diagnostic: targets, paths, parameters of
/// implemented components and non-validating annotations.
pub const KNOWN: &[&str] = &[
    TARGET_CLASS,
    TARGET_NODE,
    TARGET_SUBJECTS_OF,
    TARGET_OBJECTS_OF,
    PATH,
    PROPERTY,
    MIN_COUNT,
    MAX_COUNT,
    CLASS,
    DATATYPE,
    NODE_KIND,
    HAS_VALUE,
    IN,
    PATTERN,
    FLAGS,
    NODE,
    NOT,
    AND,
    OR,
    QUALIFIED_VALUE_SHAPE,
    QUALIFIED_MIN_COUNT,
    QUALIFIED_MAX_COUNT,
    SEVERITY,
    MESSAGE,
    DEACTIVATED,
    concat!("http://www.w3.org/ns/shacl#", "name"),
    concat!("http://www.w3.org/ns/shacl#", "description"),
    concat!("http://www.w3.org/ns/shacl#", "order"),
    concat!("http://www.w3.org/ns/shacl#", "group"),
    concat!("http://www.w3.org/ns/shacl#", "defaultValue"),
    concat!("http://www.w3.org/ns/shacl#", "declare"),
    concat!("http://www.w3.org/ns/shacl#", "prefixes"),
    concat!("http://www.w3.org/ns/shacl#", "shapesGraph"),
];

pub fn iri(s: &str) -> Iri {
    Iri::new_unchecked(s)
}
