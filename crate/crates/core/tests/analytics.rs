mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{identifier, java_files, FIELDS, LOCALS, METHODS, TYPES};
use corename_core::analytics::{
    analyze_repo, AnalysisOptions, Measured, RelationshipCounts, Report, Sequential, SetRunner,
};
use corename_core::facts::{extract_facts, RelationIndex};
use corename_core::lexicon::{Lexicon, Mode};
use corename_core::mining::{compute_all_chunks, IdentifierKind, RenameRecord};
use proptest::prelude::*;
use proptest::sample::select;

const COMMITS: &[&str] = &["c1", "c2", "c3"];

fn name() -> impl Strategy<Value = String> {
    prop_oneof![
        select(TYPES).prop_map(String::from),
        select(FIELDS).prop_map(String::from),
        select(METHODS).prop_map(String::from),
        select(LOCALS).prop_map(String::from),
        identifier(),
    ]
}

fn records() -> impl Strategy<Value = Vec<RenameRecord>> {
    prop::collection::vec(
        (
            select(COMMITS),
            select(&IdentifierKind::ALL[..]),
            name(),
            name(),
        ),
        1..30,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .filter(|(_, _, old, new)| old != new)
            .map(|(commit, kind, old, new)| RenameRecord::new(commit, kind, &old, &new, "F0.java"))
            .collect()
    })
}

/// Facts for the first two commits only, so the third has none.
fn facts() -> impl Strategy<Value = BTreeMap<String, RelationIndex>> {
    prop::collection::vec(java_files(2), 2).prop_map(|trees| {
        trees
            .iter()
            .zip(COMMITS)
            .map(|(files, c)| (c.to_string(), RelationIndex::build(&extract_facts(files).0)))
            .collect()
    })
}

/// Computes tallies back to front, then restores job order.
struct Reversed;

impl SetRunner for Reversed {
    fn run(
        &self,
        jobs: usize,
        task: &(dyn Fn(usize) -> RelationshipCounts + Sync),
    ) -> Vec<RelationshipCounts> {
        let mut out: Vec<_> = (0..jobs).rev().map(task).collect();
        out.reverse();
        out
    }
}

fn check_rate_map<K: std::fmt::Debug>(m: &Measured<BTreeMap<K, f64>>) -> Result<(), TestCaseError> {
    if let Measured::Value(rates) = m {
        prop_assert!(
            rates.values().all(|r| (0.0..=1.0).contains(r)),
            "{:?}",
            rates
        );
        let sum: f64 = rates.values().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-9, "sum {}", sum);
    }
    Ok(())
}

fn options() -> AnalysisOptions<'static> {
    AnalysisOptions {
        mode: Mode::Lemma,
        filters: IdentifierKind::ALL.to_vec(),
        sets: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rates_are_distributions(records in records(), facts in facts()) {
        let lex = Lexicon::bundled();
        let stats = analyze_repo("r", &records, &lex, &facts, &options(), &Sequential).unwrap();
        if let Measured::Value(rate) = stats.co_rename_rate {
            prop_assert!((0.0..=1.0).contains(&rate));
        }
        check_rate_map(&stats.relationships.rates)?;
        for f in stats.filtered.values() {
            check_rate_map(&f.rates)?;
            prop_assert!(f.counts.sets <= stats.relationships.counts.sets);
            prop_assert!(f.counts.related_pairs <= f.counts.pairs);
        }
        for c in stats.chunk_types.values() {
            check_rate_map(&c.rates)?;
        }
        check_rate_map(&stats.inflection.new_set_relationships.rates)?;
        if let Measured::Value(rows) = &stats.size_histogram {
            prop_assert!(rows.iter().all(|r| r.m <= r.n && r.members == r.n * r.sets));
            prop_assert!(rows.windows(2).all(|w| w[0].cumulative <= w[1].cumulative));
            prop_assert_eq!(rows.last().map(|r| r.cumulative), Some(1.0));
        }
    }

    #[test]
    fn memberships_follow_chunk_counts_in_each_mode(records in records()) {
        let lex = Lexicon::bundled();
        let empty: BTreeMap<String, RelationIndex> = BTreeMap::new();
        let stats = analyze_repo("r", &records, &lex, &empty, &options(), &Sequential).unwrap();
        for (mode, summary) in [(Mode::Raw, &stats.inflection.raw), (Mode::Lemma, &stats.inflection.lemma)] {
            let mut chunked = records.clone();
            compute_all_chunks(&mut chunked, &lex, mode).unwrap();
            let total: u64 = chunked.iter().map(|r| r.chunks.len() as u64).sum();
            let distinct: usize = chunked.iter().map(|r| r.chunks.iter().map(|c| c.key()).collect::<BTreeSet<_>>().len()).sum();
            prop_assert_eq!(stats.chunk_types[&mode].counts.values().sum::<u64>(), total);
            prop_assert_eq!(summary.members, distinct);
            prop_assert!(summary.members as u64 <= total);
        }
    }

    #[test]
    fn runner_order_does_not_matter(records in records(), facts in facts()) {
        let lex = Lexicon::bundled();
        let a = analyze_repo("r", &records, &lex, &facts, &options(), &Sequential).unwrap();
        let b = analyze_repo("r", &records, &lex, &facts, &options(), &Reversed).unwrap();
        prop_assert_eq!(&a, &b);
        let report = Report::new(vec![a]);
        for d in report.summary.metrics.values() {
            prop_assert!(d.min <= d.q1 && d.q1 <= d.median && d.median <= d.q3 && d.q3 <= d.max);
            prop_assert!(d.min <= d.mean && d.mean <= d.max);
        }
    }
}
