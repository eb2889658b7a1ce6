//! Co-rename, set size, relationship and chunk statistics per repository,
//! and their distribution across repositories.

mod summary;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::chunks::ChunkKind;
use crate::facts::{RelationIndex, RelationshipKind};
use crate::grouping::{
    build_rename_sets, collection_difference, enumerate_pairs, MeaningfulRenameSet,
    RenameSetCollection,
};
use crate::lexicon::{Lexicon, LexiconError, Mode};
use crate::mining::{compute_all_chunks, IdentifierKind, RenameRecord};

pub use summary::{summarize, Distribution, Report, Summary};

/// A statistic, or an explicit marker that there was nothing to measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measured<T> {
    Value(T),
    NoData,
}

impl<T> Measured<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Measured::Value(v) => Some(v),
            Measured::NoData => None,
        }
    }

    pub fn is_no_data(&self) -> bool {
        matches!(self, Measured::NoData)
    }
}

fn ratio(num: u64, den: u64) -> Measured<f64> {
    if den == 0 {
        Measured::NoData
    } else {
        Measured::Value(num as f64 / den as f64)
    }
}

fn rate_map<K: Ord + Copy>(counts: &BTreeMap<K, u64>) -> Measured<BTreeMap<K, f64>> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Measured::NoData;
    }
    Measured::Value(
        counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&k, &c)| (k, c as f64 / total as f64))
            .collect(),
    )
}

/// Share of set memberships that fall in sets with at least two members.
pub fn co_rename_rate(coll: &RenameSetCollection) -> Measured<f64> {
    let total = coll.member_total() as u64;
    let co = coll
        .sets
        .iter()
        .filter(|s| s.len() >= 2)
        .map(|s| s.len() as u64)
        .sum();
    ratio(co, total)
}

/// One histogram cell: sets of size `n` with `m` distinct old names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub n: usize,
    pub m: usize,
    pub sets: usize,
    pub members: usize,
    /// Members of sets with size at most `n`, over all co-rename members.
    pub cumulative: f64,
}

pub fn size_distribution(
    coll: &RenameSetCollection,
    records: &[RenameRecord],
) -> Measured<Vec<SizeRow>> {
    let mut cells: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for s in coll.sets.iter().filter(|s| s.len() >= 2) {
        *cells
            .entry((s.len(), s.unique_old_names(records)))
            .or_default() += 1;
    }
    let total: usize = cells.iter().map(|(&(n, _), &count)| n * count).sum();
    if total == 0 {
        return Measured::NoData;
    }
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for (&(n, _), &count) in &cells {
        *by_size.entry(n).or_default() += n * count;
    }
    let mut running = 0usize;
    let cumulative: BTreeMap<usize, f64> = by_size
        .into_iter()
        .map(|(n, members)| {
            running += members;
            (n, running as f64 / total as f64)
        })
        .collect();
    Measured::Value(
        cells
            .into_iter()
            .map(|((n, m), sets)| SizeRow {
                n,
                m,
                sets,
                members: n * sets,
                cumulative: cumulative[&n],
            })
            .collect(),
    )
}

/// Relation lookups per commit.
pub trait FactsProvider {
    fn relations(&self, commit: &str) -> Option<&RelationIndex>;
}

/// One snapshot for every commit.
impl FactsProvider for RelationIndex {
    fn relations(&self, _commit: &str) -> Option<&RelationIndex> {
        Some(self)
    }
}

impl FactsProvider for BTreeMap<String, RelationIndex> {
    fn relations(&self, commit: &str) -> Option<&RelationIndex> {
        self.get(commit)
    }
}

/// Per-commit facts with an optional snapshot for commits that have none.
pub struct CommitFacts<'a> {
    pub by_commit: &'a BTreeMap<String, RelationIndex>,
    pub fallback: Option<&'a RelationIndex>,
}

impl FactsProvider for CommitFacts<'_> {
    fn relations(&self, commit: &str) -> Option<&RelationIndex> {
        self.by_commit.get(commit).or(self.fallback)
    }
}

/// Relationship detections over member pairs of a group of sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationshipCounts {
    pub counts: BTreeMap<RelationshipKind, u64>,
    /// Sets with at least two members that passed the filter.
    pub sets: u64,
    /// Of those, sets whose commit had no facts; they contribute no pairs.
    pub sets_without_facts: u64,
    pub pairs: u64,
    /// Pairs with at least one relationship.
    pub related_pairs: u64,
}

impl RelationshipCounts {
    pub fn merge(&mut self, other: &RelationshipCounts) {
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        self.sets += other.sets;
        self.sets_without_facts += other.sets_without_facts;
        self.pairs += other.pairs;
        self.related_pairs += other.related_pairs;
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn rates(&self) -> Measured<BTreeMap<RelationshipKind, f64>> {
        rate_map(&self.counts)
    }
}

/// Counts every relationship kind once per unordered member pair.
pub fn tally_set(
    set: &MeaningfulRenameSet,
    records: &[RenameRecord],
    index: &RelationIndex,
) -> RelationshipCounts {
    let mut out = RelationshipCounts {
        sets: 1,
        ..Default::default()
    };
    for (a, b) in enumerate_pairs(set) {
        let found = index.get(&records[a].old_name, &records[b].old_name);
        out.pairs += 1;
        if !found.is_empty() {
            out.related_pairs += 1;
        }
        for k in found.iter() {
            *out.counts.entry(k).or_default() += 1;
        }
    }
    out
}

/// Runs independent per-set tallies, possibly in parallel. Results must be
/// returned in job order.
pub trait SetRunner {
    fn run(
        &self,
        jobs: usize,
        task: &(dyn Fn(usize) -> RelationshipCounts + Sync),
    ) -> Vec<RelationshipCounts>;
}

pub struct Sequential;

impl SetRunner for Sequential {
    fn run(
        &self,
        jobs: usize,
        task: &(dyn Fn(usize) -> RelationshipCounts + Sync),
    ) -> Vec<RelationshipCounts> {
        (0..jobs).map(task).collect()
    }
}

/// Counts and rates of relationship kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationshipStats {
    #[serde(flatten)]
    pub counts: RelationshipCounts,
    pub rates: Measured<BTreeMap<RelationshipKind, f64>>,
}

impl From<RelationshipCounts> for RelationshipStats {
    fn from(counts: RelationshipCounts) -> Self {
        let rates = counts.rates();
        RelationshipStats { counts, rates }
    }
}

/// Relationship detections over the co-rename sets (size at least two),
/// restricted to sets with a member of kind `filter` when given.
pub fn relationship_counts<'s, F>(
    sets: impl IntoIterator<Item = &'s MeaningfulRenameSet>,
    records: &[RenameRecord],
    facts: &F,
    filter: Option<IdentifierKind>,
    runner: &dyn SetRunner,
) -> RelationshipCounts
where
    F: FactsProvider + Sync + ?Sized,
{
    let eligible: Vec<&MeaningfulRenameSet> = sets
        .into_iter()
        .filter(|s| s.len() >= 2)
        .filter(|s| filter.is_none_or(|k| s.members.iter().any(|&i| records[i].kind == k)))
        .collect();
    let task = |i: usize| {
        let set = eligible[i];
        match facts.relations(&set.commit) {
            Some(index) => tally_set(set, records, index),
            None => RelationshipCounts {
                sets: 1,
                sets_without_facts: 1,
                ..Default::default()
            },
        }
    };
    let mut total = RelationshipCounts::default();
    for part in runner.run(eligible.len(), &task) {
        total.merge(&part);
    }
    total
}

pub fn relationship_rates<F>(
    coll: &RenameSetCollection,
    records: &[RenameRecord],
    facts: &F,
    filter: Option<IdentifierKind>,
    runner: &dyn SetRunner,
) -> Measured<BTreeMap<RelationshipKind, f64>>
where
    F: FactsProvider + Sync + ?Sized,
{
    relationship_counts(&coll.sets, records, facts, filter, runner).rates()
}

pub fn chunk_type_counts(records: &[RenameRecord]) -> BTreeMap<ChunkKind, u64> {
    let mut counts = BTreeMap::new();
    for c in records.iter().flat_map(|r| &r.chunks) {
        *counts.entry(c.kind).or_default() += 1;
    }
    counts
}

/// Share of each chunk kind among all chunks of the records.
pub fn chunk_type_rates(records: &[RenameRecord]) -> Measured<BTreeMap<ChunkKind, f64>> {
    rate_map(&chunk_type_counts(records))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkStats {
    pub counts: BTreeMap<ChunkKind, u64>,
    pub rates: Measured<BTreeMap<ChunkKind, f64>>,
}

/// Set-level figures of one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub sets: usize,
    pub members: usize,
    pub co_rename_rate: Measured<f64>,
}

impl ModeSummary {
    fn of(coll: &RenameSetCollection) -> ModeSummary {
        ModeSummary {
            sets: coll.len(),
            members: coll.member_total(),
            co_rename_rate: co_rename_rate(coll),
        }
    }
}

/// Raw versus lemma mode, and the sets only lemma mode creates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflectionImpact {
    pub raw: ModeSummary,
    pub lemma: ModeSummary,
    /// Lemma-mode sets whose member set no raw-mode set has.
    pub new_sets: usize,
    pub new_co_rename_sets: usize,
    pub new_set_relationships: RelationshipStats,
}

/// Both modes end to end. `raw` and `lemma` must hold the same records with
/// chunks computed in the respective mode.
pub fn inflection_impact<F>(
    raw: &[RenameRecord],
    lemma: &[RenameRecord],
    facts: &F,
    runner: &dyn SetRunner,
) -> InflectionImpact
where
    F: FactsProvider + Sync + ?Sized,
{
    let raw_coll = build_rename_sets(raw, Mode::Raw);
    let lemma_coll = build_rename_sets(lemma, Mode::Lemma);
    let created = collection_difference(&lemma_coll, &raw_coll);
    let counts = relationship_counts(created.iter().copied(), lemma, facts, None, runner);
    InflectionImpact {
        raw: ModeSummary::of(&raw_coll),
        lemma: ModeSummary::of(&lemma_coll),
        new_sets: created.len(),
        new_co_rename_sets: created.iter().filter(|s| s.len() >= 2).count(),
        new_set_relationships: counts.into(),
    }
}

/// Everything measured for one repository.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepoStats {
    pub repo: String,
    /// Mode of the collection the set statistics are computed on.
    pub mode: Mode,
    pub records: usize,
    pub sets: usize,
    pub members: usize,
    pub co_rename_rate: Measured<f64>,
    pub size_histogram: Measured<Vec<SizeRow>>,
    pub relationships: RelationshipStats,
    pub filtered: BTreeMap<IdentifierKind, RelationshipStats>,
    pub chunk_types: BTreeMap<Mode, ChunkStats>,
    pub inflection: InflectionImpact,
}

/// What to compute for a repository.
pub struct AnalysisOptions<'a> {
    pub mode: Mode,
    pub filters: Vec<IdentifierKind>,
    /// Precomputed sets in `mode`, used instead of grouping the records.
    pub sets: Option<&'a RenameSetCollection>,
}

/// Computes every statistic for one repository's records.
pub fn analyze_repo<F>(
    repo: &str,
    records: &[RenameRecord],
    lexicon: &Lexicon,
    facts: &F,
    options: &AnalysisOptions<'_>,
    runner: &dyn SetRunner,
) -> Result<RepoStats, (usize, LexiconError)>
where
    F: FactsProvider + Sync + ?Sized,
{
    let mut raw = records.to_vec();
    compute_all_chunks(&mut raw, lexicon, Mode::Raw)?;
    let mut lemma = records.to_vec();
    compute_all_chunks(&mut lemma, lexicon, Mode::Lemma)?;
    let primary = match options.mode {
        Mode::Raw => &raw,
        Mode::Lemma => &lemma,
    };
    let built;
    let coll = match options.sets {
        Some(sets) => sets,
        None => {
            built = build_rename_sets(primary, options.mode);
            &built
        }
    };

    let relationships = relationship_counts(&coll.sets, primary, facts, None, runner).into();
    let filtered = options
        .filters
        .iter()
        .map(|&k| {
            (
                k,
                relationship_counts(&coll.sets, primary, facts, Some(k), runner).into(),
            )
        })
        .collect();
    let chunk_types = [(Mode::Raw, &raw), (Mode::Lemma, &lemma)]
        .into_iter()
        .map(|(mode, rs)| {
            let counts = chunk_type_counts(rs);
            let rates = rate_map(&counts);
            (mode, ChunkStats { counts, rates })
        })
        .collect();

    Ok(RepoStats {
        repo: String::from(repo),
        mode: options.mode,
        records: records.len(),
        sets: coll.len(),
        members: coll.member_total(),
        co_rename_rate: co_rename_rate(coll),
        size_histogram: size_distribution(coll, primary),
        relationships,
        filtered,
        chunk_types,
        inflection: inflection_impact(&raw, &lemma, facts, runner),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunks::ChunkKey;
    use alloc::vec;

    fn set(commit: &str, members: Vec<usize>) -> MeaningfulRenameSet {
        MeaningfulRenameSet {
            commit: commit.into(),
            key: ChunkKey::parse("I||x").unwrap(),
            members,
        }
    }

    fn coll(sets: Vec<MeaningfulRenameSet>) -> RenameSetCollection {
        RenameSetCollection {
            mode: Mode::Raw,
            sets,
        }
    }

    fn recs(names: &[&str]) -> Vec<RenameRecord> {
        names
            .iter()
            .map(|n| RenameRecord::new("c", IdentifierKind::Variable, n, "z", "F.java"))
            .collect()
    }

    #[test]
    fn co_rename_rate_examples() {
        assert_eq!(
            co_rename_rate(&coll(vec![set("c", vec![0, 1, 2]), set("c", vec![3])])),
            Measured::Value(0.75)
        );
        assert_eq!(
            co_rename_rate(&coll(vec![set("c", vec![0]), set("c", vec![1])])),
            Measured::Value(0.0)
        );
        assert_eq!(co_rename_rate(&coll(vec![])), Measured::NoData);
    }

    #[test]
    fn size_rows() {
        let rs = recs(&["a", "b", "a", "c", "d"]);
        let rows = size_distribution(&coll(vec![set("c", vec![3, 4])]), &rs);
        assert_eq!(
            rows,
            Measured::Value(vec![SizeRow {
                n: 2,
                m: 2,
                sets: 1,
                members: 2,
                cumulative: 1.0
            }])
        );
        let rows = size_distribution(
            &coll(vec![
                set("c", vec![0, 1, 2]),
                set("c", vec![3, 4]),
                set("c", vec![0]),
            ]),
            &rs,
        );
        let rows = rows.value().unwrap();
        assert_eq!((rows[0].n, rows[0].m, rows[0].members), (2, 2, 2));
        assert_eq!((rows[1].n, rows[1].m, rows[1].members), (3, 2, 3));
        assert_eq!(rows[0].cumulative, 0.4);
        assert_eq!(rows[1].cumulative, 1.0);
        assert_eq!(
            size_distribution(&coll(vec![set("c", vec![0])]), &rs),
            Measured::NoData
        );
    }

    #[test]
    fn rates_sum_to_one_and_filter_can_be_empty() {
        let mut counts = RelationshipCounts::default();
        counts.counts.insert(RelationshipKind::TypeV, 3);
        counts.counts.insert(RelationshipKind::Assigns, 1);
        let rates = counts.rates();
        let sum: f64 = rates.value().unwrap().values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(RelationshipCounts::default().rates(), Measured::NoData);

        let rs = recs(&["a", "b"]);
        let c = coll(vec![set("c", vec![0, 1])]);
        let index = RelationIndex::default();
        let counts = relationship_counts(
            &c.sets,
            &rs,
            &index,
            Some(IdentifierKind::Method),
            &Sequential,
        );
        assert_eq!(counts.sets, 0);
        assert_eq!(counts.rates(), Measured::NoData);
    }

    #[test]
    fn missing_facts_are_counted() {
        let rs = recs(&["a", "b"]);
        let c = coll(vec![set("c", vec![0, 1])]);
        let none: BTreeMap<String, RelationIndex> = BTreeMap::new();
        let counts = relationship_counts(&c.sets, &rs, &none, None, &Sequential);
        assert_eq!(
            (counts.sets, counts.sets_without_facts, counts.pairs),
            (1, 1, 0)
        );
    }

    #[test]
    fn chunk_rates_by_mode() {
        let lex = Lexicon::bundled();
        let mut rs = vec![RenameRecord::new(
            "c",
            IdentifierKind::Variable,
            "node",
            "nodes",
            "F.java",
        )];
        compute_all_chunks(&mut rs, &lex, Mode::Raw).unwrap();
        assert_eq!(
            chunk_type_rates(&rs),
            Measured::Value([(ChunkKind::Replace, 1.0)].into_iter().collect())
        );
        compute_all_chunks(&mut rs, &lex, Mode::Lemma).unwrap();
        assert_eq!(
            chunk_type_rates(&rs),
            Measured::Value([(ChunkKind::Inflect, 1.0)].into_iter().collect())
        );
        let mut t = vec![RenameRecord::new(
            "c",
            IdentifierKind::Attribute,
            "TIMES",
            "times",
            "F.java",
        )];
        compute_all_chunks(&mut t, &lex, Mode::Lemma).unwrap();
        assert_eq!(
            chunk_type_rates(&t),
            Measured::Value([(ChunkKind::Other, 1.0)].into_iter().collect())
        );
        assert_eq!(chunk_type_rates(&[]), Measured::NoData);
    }
}
