use std::fmt;

use amlshacl_rdf::parse_turtle;

use crate::LlmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionLabel {
    OntologyContext,
    RelevantLibraries,
    Examples,
    Constraints,
    Report,
    Shapes,
    Ontology,
}

impl SectionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SectionLabel::OntologyContext => "ONTOLOGY CONTEXT",
            SectionLabel::RelevantLibraries => "RELEVANT LIBRARIES",
            SectionLabel::Examples => "EXAMPLES",
            SectionLabel::Constraints => "CONSTRAINTS",
            SectionLabel::Report => "VALIDATION REPORT",
            SectionLabel::Shapes => "SHACL SHAPES",
            SectionLabel::Ontology => "ONTOLOGY",
        }
    }
}

impl fmt::Display for SectionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub label: SectionLabel,
    pub body: String,
}

/// A prompt ready to send: standing instructions as the system message and
/// the labelled sections concatenated as the user message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub system_text: String,
    pub user_text: String,
    pub sections: Vec<Section>,
}

impl PromptBundle {
    pub fn new(system_text: impl Into<String>, sections: Vec<Section>) -> Self {
        let user_text = sections.iter().map(render_section).collect();
        PromptBundle {
            system_text: system_text.into(),
            user_text,
            sections,
        }
    }

    pub fn section(&self, label: SectionLabel) -> Option<&Section> {
        self.sections.iter().find(|s| s.label == label)
    }
}

fn render_section(s: &Section) -> String {
    format!(
        "=== BEGIN {label} ===\n{body}\n=== END {label} ===\n\n",
        label = s.label,
        body = s.body.trim_end()
    )
}

/// A worked example for shape generation: constraint text and its shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeExample {
    pub constraint: String,
    pub shapes_turtle: String,
}

/// A worked example for report interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpretationExample {
    pub report_turtle: String,
    pub explanation: String,
}

const SHAPE_INSTRUCTIONS: &str = "\
You translate textual AutomationML constraints into SHACL shapes.

Rules for your answer:
- Answer with Turtle only. Add no commentary, no Markdown formatting and no code fences.
- Declare every prefix you use with @prefix, including sh:, rdf:, rdfs:, xsd: and the vocabulary prefixes.
- Construct class and property IRIs exactly as described in the ONTOLOGY CONTEXT section. Classes of a library are addressed by their library path.
- Give every node shape and property shape an IRI in the namespace <https://aml-shacl.example/shapes#>. Name the top-level shape after the rule it checks.
- Write one sh:message per top-level shape that restates the constraint in plain words.
- Use only these SHACL Core features: sh:targetClass, sh:targetNode, sh:targetSubjectsOf, sh:targetObjectsOf, sh:property, sh:path with predicate, sh:inversePath, sequence and sh:alternativePath paths, sh:minCount, sh:maxCount, sh:class, sh:datatype, sh:nodeKind, sh:hasValue, sh:in, sh:pattern, sh:flags, sh:node, sh:not, sh:and, sh:or, sh:qualifiedValueShape, sh:qualifiedMinCount, sh:qualifiedMaxCount, sh:severity, sh:message.
- Do not use SPARQL-based constraints.";

const INTERPRETATION_INSTRUCTIONS: &str = "\
You explain SHACL validation reports about AutomationML models to automation engineers.

Rules for your answer:
- Write Markdown.
- For each sh:result in the VALIDATION REPORT, name the affected AutomationML element (use its name, not only its IRI), state which rule it breaks in plain language, and propose specific corrections to the AutomationML model.
- Use the SHACL SHAPES, ONTOLOGY and RELEVANT LIBRARIES sections to relate IRIs back to model elements and library classes.
- If the report conforms (sh:conforms true, no results), say that the model satisfies all checked rules and suggest nothing.
- Follow the structure of the worked example in the EXAMPLES section.";

/// Prompt for turning textual constraints into SHACL shapes. `iri_docs`
/// describes how model and library IRIs are formed.
pub fn build_shape_prompt(
    ontology_summary: &str,
    libraries: &[String],
    examples: &[ShapeExample],
    constraints: &[String],
    iri_docs: &str,
) -> Result<PromptBundle, LlmError> {
    if constraints.is_empty() {
        return Err(LlmError::EmptyConstraints);
    }
    let context = format!("{}\n\n{}", ontology_summary.trim_end(), iri_docs.trim_end());
    let examples_body = examples
        .iter()
        .enumerate()
        .map(|(i, e)| {
            format!(
                "Example {n}\nConstraint:\n{c}\n\nShapes:\n{s}",
                n = i + 1,
                c = e.constraint.trim_end(),
                s = e.shapes_turtle.trim_end()
            )
        })
        .collect::<Vec<_>>()
        .join("\n\n");
    let constraints_body = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| format!("Constraint {}:\n{}", i + 1, c.trim_end()))
        .collect::<Vec<_>>()
        .join("\n\n");
    Ok(PromptBundle::new(
        SHAPE_INSTRUCTIONS,
        vec![
            Section {
                label: SectionLabel::OntologyContext,
                body: context,
            },
            Section {
                label: SectionLabel::RelevantLibraries,
                body: libraries_body(libraries),
            },
            Section {
                label: SectionLabel::Examples,
                body: examples_body,
            },
            Section {
                label: SectionLabel::Constraints,
                body: constraints_body,
            },
        ],
    ))
}

fn libraries_body(libraries: &[String]) -> String {
    if libraries.is_empty() {
        return "(none)".into();
    }
    libraries
        .iter()
        .enumerate()
        .map(|(i, l)| format!("--- library {} ---\n{}", i + 1, l.trim()))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// One-shot prompt for explaining a validation report.
pub fn build_interpretation_prompt(
    report_turtle: &str,
    shapes_turtle: &str,
    ontology_turtle: &str,
    libraries: &[String],
    example: &InterpretationExample,
) -> Result<PromptBundle, LlmError> {
    parse_turtle(report_turtle).map_err(|e| LlmError::BadReport(e.to_string()))?;
    let example_body = format!(
        "Report:\n{}\n\nExplanation:\n{}",
        example.report_turtle.trim_end(),
        example.explanation.trim_end()
    );
    Ok(PromptBundle::new(
        INTERPRETATION_INSTRUCTIONS,
        vec![
            Section {
                label: SectionLabel::Report,
                body: report_turtle.to_string(),
            },
            Section {
                label: SectionLabel::Shapes,
                body: shapes_turtle.to_string(),
            },
            Section {
                label: SectionLabel::Ontology,
                body: ontology_turtle.to_string(),
            },
            Section {
                label: SectionLabel::RelevantLibraries,
                body: libraries_body(libraries),
            },
            Section {
                label: SectionLabel::Examples,
                body: example_body,
            },
        ],
    ))
}
