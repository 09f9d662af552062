use std::collections::BTreeSet;

use amlshacl::{parse_constraints, RunConfig, Stage};
use proptest::prelude::*;

fn constraint() -> impl Strategy<Value = String> {
    prop::collection::vec("[A-Za-z][A-Za-z ,.]{0,20}", 1..3)
        .prop_map(|lines: Vec<String>| lines.iter().map(|l| l.trim_end()).collect::<Vec<_>>().join("\n"))
}

proptest! {
    #[test]
    fn constraints_survive_a_write_read_cycle(
        cs in prop::collection::vec(constraint(), 0..5),
        gap in 1..4usize,
        comment in any::<bool>(),
    ) {
        let sep = "\n".repeat(gap + 1);
        let mut text = cs.join(&sep);
        if comment {
            text = format!("# header\n\n{text}\n# trailer\n");
        }
        prop_assert_eq!(parse_constraints(&text), cs);
    }

    /// A configuration that passes `check` never asks a stage for an input
    /// that no enabled stage or override provides.
    #[test]
    fn checked_stage_sets_are_sound(
        stages in prop::collection::btree_set(prop::sample::select(Stage::ALL.to_vec()), 0..=4),
        shapes in any::<bool>(),
    ) {
        let mut cfg = RunConfig::new("m.aml", "out");
        cfg.llm.fixtures_dir = Some("fx".into());
        cfg.stages = stages.clone();
        cfg.shapes_override = shapes.then(|| "s.ttl".into());
        if cfg.check().is_ok() {
            let has = |s| stages.contains(&s);
            if has(Stage::Validate) {
                prop_assert!(has(Stage::Map));
                prop_assert!(has(Stage::Generate) != shapes);
            }
            if has(Stage::Interpret) {
                prop_assert!(has(Stage::Validate));
            }
            prop_assert!(!(has(Stage::Generate) && shapes));
        }
        let all: BTreeSet<Stage> = Stage::ALL.into_iter().collect();
        if stages == all && !shapes {
            prop_assert!(cfg.check().is_ok());
        }
    }
}
