//! Runs the vendored W3C SHACL core test cases.

use std::path::{Path, PathBuf};

#[path = "w3c/harness.rs"]
mod harness;

fn suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/w3c")
}

#[test]
fn w3c_core_cases() {
    let suite = suite_dir();
    let cases = harness::selected_cases(&suite);
    assert_eq!(cases.len(), 58);
    let failures: Vec<String> = cases
        .iter()
        .filter_map(|c| harness::check(&suite, c).err().map(|e| format!("{c}: {e}")))
        .collect();
    assert!(
        failures.is_empty(),
        "{} of {} cases failed:\n{}",
        failures.len(),
        cases.len(),
        failures.join("\n\n")
    );
}
