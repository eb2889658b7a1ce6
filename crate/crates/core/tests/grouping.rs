mod common;

use common::identifier;
use corename_core::grouping::{build_rename_sets, collection_difference, enumerate_pairs};
use corename_core::lexicon::{Lexicon, Mode};
use corename_core::mining::{compute_all_chunks, IdentifierKind, RenameRecord};
use proptest::prelude::*;
use proptest::sample::select;
use std::collections::BTreeSet;

fn records() -> impl Strategy<Value = Vec<RenameRecord>> {
    prop::collection::vec(
        (select(&["c1", "c2", "c3"][..]), identifier(), identifier()),
        1..25,
    )
    .prop_map(|raw| {
        raw.into_iter()
            .filter(|(_, old, new)| old != new)
            .map(|(commit, old, new)| {
                RenameRecord::new(commit, IdentifierKind::Variable, &old, &new, "F.java")
            })
            .collect()
    })
}

fn chunked(records: &[RenameRecord], mode: Mode) -> Vec<RenameRecord> {
    let mut out = records.to_vec();
    compute_all_chunks(&mut out, &Lexicon::bundled(), mode).unwrap();
    out
}

proptest! {
    #[test]
    fn sets_match_their_defining_predicate(records in records()) {
        for mode in [Mode::Raw, Mode::Lemma] {
            let records = chunked(&records, mode);
            let coll = build_rename_sets(&records, mode);
            let mut identities = BTreeSet::new();
            for set in &coll.sets {
                prop_assert!(!set.is_empty());
                prop_assert!(identities.insert((set.commit.clone(), set.key.clone())));
                prop_assert!(set.members.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(enumerate_pairs(set).len(), set.len() * (set.len() - 1) / 2);
                for (i, r) in records.iter().enumerate() {
                    let qualifies = r.commit == set.commit && r.chunks.iter().any(|c| c.key() == set.key);
                    prop_assert_eq!(set.members.contains(&i), qualifies);
                }
            }
            for r in &records {
                for c in &r.chunks {
                    prop_assert!(identities.contains(&(r.commit.clone(), c.key())));
                }
            }
        }
    }

    #[test]
    fn memberships_cover_every_record(records in records()) {
        let records = chunked(&records, Mode::Lemma);
        let coll = build_rename_sets(&records, Mode::Lemma);
        let distinct: usize = records.iter().map(|r| r.chunks.iter().map(|c| c.key()).collect::<BTreeSet<_>>().len()).sum();
        prop_assert_eq!(coll.member_total(), distinct);
        let chunked_records = records.iter().filter(|r| !r.chunks.is_empty()).count();
        prop_assert!(coll.member_total() >= chunked_records);
        if records.iter().all(|r| r.chunks.len() == 1) {
            prop_assert_eq!(coll.member_total(), records.len());
        }
    }

    #[test]
    fn difference_is_empty_against_itself(records in records()) {
        let records = chunked(&records, Mode::Lemma);
        let coll = build_rename_sets(&records, Mode::Lemma);
        prop_assert!(collection_difference(&coll, &coll).is_empty());
    }
}
