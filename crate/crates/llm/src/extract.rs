use amlshacl_rdf::parse_turtle;

/// Pull a Turtle document out of a model response.
///
/// Fenced code blocks are tried first, in order. Within a candidate the text
/// is cut from the first directive line (`@prefix`, `@base`, `PREFIX`,
/// `BASE`) through the last line ending in `.` that leaves parseable
/// Turtle; failing that, the whole candidate is tried. The result must parse and hold at least one
/// triple. Returns `None` when nothing qualifies.
pub fn extract_turtle(response: &str) -> Option<String> {
    let blocks = fenced_blocks(response);
    let candidates = if blocks.is_empty() {
        vec![response.to_string()]
    } else {
        blocks
    };
    candidates.iter().find_map(|c| from_candidate(c))
}

fn from_candidate(text: &str) -> Option<String> {
    trim_to_statements(text).or_else(|| Some(text.trim().to_string()).filter(|t| usable(t)))
}

fn usable(text: &str) -> bool {
    !text.is_empty() && parse_turtle(text).is_ok_and(|g| !g.is_empty())
}

fn is_directive(line: &str) -> bool {
    let l = line.trim_start();
    let lower = l.get(..7).map(str::to_ascii_lowercase).unwrap_or_default();
    l.starts_with("@prefix") || l.starts_with("@base") || lower == "prefix " || lower.starts_with("base ")
}

/// From the first directive to the latest line ending in `.` at which the
/// text still parses.
fn trim_to_statements(text: &str) -> Option<String> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| is_directive(l))?;
    (start..lines.len())
        .rev()
        .filter(|&end| lines[end].trim_end().ends_with('.'))
        .map(|end| lines[start..=end].join("\n").trim().to_string())
        .find(|t| usable(t))
}

/// Contents of ``` fenced blocks; an unterminated fence runs to the end.
fn fenced_blocks(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Option<Vec<&str>> = None;
    for line in text.lines() {
        let fence = line.trim_start().starts_with("```");
        match (&mut current, fence) {
            (None, true) => current = Some(Vec::new()),
            (Some(body), true) => {
                out.push(body.join("\n"));
                current = None;
            }
            (Some(body), false) => body.push(line),
            (None, false) => {}
        }
    }
    if let Some(body) = current {
        out.push(body.join("\n"));
    }
    out
}
