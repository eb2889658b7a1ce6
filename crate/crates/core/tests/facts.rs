mod common;

use common::{all_names, java_files};
use corename_core::facts::{
    detect_relationships, extract_facts, EntityKind, RelationIndex, RelationshipKind,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_sources_parse(files in java_files(3)) {
        let (_, skipped) = extract_facts(&files);
        prop_assert!(skipped.is_empty(), "{:?}", skipped);
    }

    #[test]
    fn detection_ignores_argument_order(files in java_files(3)) {
        let (facts, _) = extract_facts(&files);
        let names = all_names();
        for a in &names {
            for b in &names {
                prop_assert_eq!(detect_relationships(&facts, a, b), detect_relationships(&facts, b, a));
            }
        }
    }

    #[test]
    fn adding_a_file_keeps_every_relationship(files in java_files(4)) {
        let (fewer, _) = extract_facts(&files[..files.len() - 1]);
        let (more, _) = extract_facts(&files);
        let (small, large) = (RelationIndex::build(&fewer), RelationIndex::build(&more));
        let names = all_names();
        for a in &names {
            for b in &names {
                let before = small.get(a, b);
                prop_assert_eq!(before.union(large.get(a, b)), large.get(a, b), "{} {} lost relationships", a, b);
            }
        }
    }

    #[test]
    fn invokes_and_accesses_stay_well_formed(files in java_files(3)) {
        let (facts, _) = extract_facts(&files);
        let index = RelationIndex::build(&facts);
        for name in all_names() {
            prop_assert!(!index.get(&name, &name).contains(RelationshipKind::Invokes));
        }
        for row in &facts.accesses {
            let method = facts.entity(row.entity).unwrap();
            let class = method.container.unwrap();
            let declared = facts
                .entities
                .iter()
                .any(|e| e.kind == EntityKind::Attribute && e.container == Some(class) && e.name == row.name);
            prop_assert!(declared, "{} accesses undeclared {}", method.name, row.name);
        }
    }
}
