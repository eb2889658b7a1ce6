mod common;

use std::collections::BTreeMap;

use common::{java_files, FIELDS, LOCALS, METHODS, TYPES};
use corename_core::chunks::diff_chunks;
use corename_core::facts::{extract_facts, RelationIndex, RelationSet, RelationshipKind};
use corename_core::lexicon::{Lexicon, Mode};
use corename_core::mining::{IdentifierKind, RenameRecord};
use corename_core::recommend::{
    generate_candidates, rank_candidates, CandidateTarget, PriorProfile, RecommendationCandidate,
};
use proptest::prelude::*;
use proptest::sample::select;

fn trigger() -> impl Strategy<Value = (IdentifierKind, &'static str, &'static str)> {
    prop_oneof![
        (
            select(TYPES),
            select(&["Element", "Record", "MetricAttribute"][..])
        )
            .prop_map(|(o, n)| (IdentifierKind::Class, o, n)),
        (
            select(METHODS),
            select(&["getElement", "addEntry", "removeElements"][..])
        )
            .prop_map(|(o, n)| (IdentifierKind::Method, o, n)),
        (
            select(FIELDS),
            select(&["element", "total", "metricAttribute"][..])
        )
            .prop_map(|(o, n)| (IdentifierKind::Attribute, o, n)),
        (select(LOCALS), select(&["newValue", "entries", "node"][..])).prop_map(|(o, n)| (
            IdentifierKind::Variable,
            o,
            n
        )),
    ]
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Raw), Just(Mode::Lemma)]
}

fn relation_set() -> impl Strategy<Value = RelationSet> {
    prop::collection::vec(select(&RelationshipKind::ALL[..]), 0..4).prop_map(RelationSet::from_iter)
}

/// Weights on a 1/64 grid so that scaled sums stay exact.
fn profile() -> impl Strategy<Value = PriorProfile> {
    prop::collection::vec(0..64u32, 14 * 5).prop_map(|w| {
        let weights = IdentifierKind::ALL
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let row = RelationshipKind::ALL
                    .iter()
                    .enumerate()
                    .map(|(j, &r)| (r, f64::from(w[i * 14 + j] + 1) / 64.0));
                (k, row.collect())
            })
            .collect();
        PriorProfile {
            weights,
            default_weight: 0.0,
        }
    })
}

fn candidates() -> impl Strategy<Value = Vec<RecommendationCandidate>> {
    prop::collection::vec(
        (
            select(&IdentifierKind::ALL[..]),
            "[a-z]{1,3}",
            relation_set(),
        ),
        1..12,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (kind, name, relationships))| RecommendationCandidate {
                target: CandidateTarget {
                    name: name.clone(),
                    kind,
                    file: "F.java".into(),
                    line: i as u32,
                    container: String::new(),
                    entity: i as u32,
                },
                proposed_name: format!("{name}X"),
                relationships,
                score: 0.0,
            })
            .collect()
    })
}

fn order(ranked: &[RecommendationCandidate]) -> Vec<u32> {
    ranked.iter().map(|c| c.target.entity).collect()
}

proptest! {
    #[test]
    fn positive_relationship_never_lowers_rank(
        cands in candidates(),
        profile in profile(),
        pick in any::<prop::sample::Index>(),
        extra in select(&RelationshipKind::ALL[..]),
    ) {
        let trigger = IdentifierKind::Method;
        let target = pick.index(cands.len()) as u32;
        let before = order(&rank_candidates(cands.clone(), &profile, trigger, None));
        let mut boosted = cands;
        boosted[target as usize].relationships.insert(extra);
        let after = order(&rank_candidates(boosted, &profile, trigger, None));
        let rank = |o: &[u32]| o.iter().position(|&e| e == target).unwrap();
        prop_assert!(rank(&after) <= rank(&before));
    }

    #[test]
    fn scaling_weights_keeps_the_order(
        cands in candidates(),
        profile in profile(),
        factor in 1..8u32,
        shift in -4..4i32,
        trigger in select(&IdentifierKind::ALL[..]),
    ) {
        let c = f64::from(factor) * 2f64.powi(shift);
        let mut scaled = profile.clone();
        for row in scaled.weights.values_mut() {
            for w in row.values_mut() {
                *w *= c;
            }
        }
        prop_assert_eq!(
            order(&rank_candidates(cands.clone(), &profile, trigger, None)),
            order(&rank_candidates(cands, &scaled, trigger, None))
        );
    }

    #[test]
    fn score_is_the_sum_of_weights(cands in candidates(), profile in profile(), trigger in select(&IdentifierKind::ALL[..])) {
        for c in rank_candidates(cands, &profile, trigger, None) {
            let expected = if c.relationships.is_empty() {
                profile.default_weight
            } else {
                c.relationships.iter().map(|k| profile.weight(trigger, k)).sum()
            };
            prop_assert_eq!(c.score, expected);
            prop_assert!(c.score >= 0.0);
        }
    }

    #[test]
    fn candidates_carry_the_trigger_chunk(files in java_files(3), (kind, old, new) in trigger(), mode in mode()) {
        let (facts, _) = extract_facts(&files);
        let index = RelationIndex::build(&facts);
        let lex = Lexicon::bundled();
        let mut rename = RenameRecord::new("c", kind, old, new, "F0.java");
        rename.compute_chunks(&lex, mode).unwrap();
        let keys: Vec<_> = rename.chunks.iter().map(|c| c.key()).collect();
        let mut seen = BTreeMap::new();
        for cand in generate_candidates(&rename, &facts, &index, &lex, mode) {
            prop_assert_ne!(&cand.target.name, old);
            prop_assert_ne!(&cand.proposed_name, &cand.target.name);
            prop_assert!(seen.insert((cand.target.entity, cand.proposed_name.clone()), ()).is_none());
            prop_assert_eq!(cand.relationships, index.get(old, &cand.target.name));
            let target = lex.normalize(&cand.target.name, mode).unwrap();
            let proposed = lex.normalize(&cand.proposed_name, mode).unwrap();
            let produced: Vec<_> = diff_chunks(&target, &proposed).iter().map(|c| c.key()).collect();
            prop_assert!(
                keys.iter().any(|k| produced.contains(k)),
                "{} -> {} has {:?}, trigger {:?}", cand.target.name, cand.proposed_name, produced, keys
            );
        }
    }
}
