//! Meaningful rename sets: renames of one commit that share a chunk.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::chunks::ChunkKey;
use crate::lexicon::Mode;
use crate::mining::RenameRecord;

/// All renames of `commit` whose chunks include `key`. Members are indices
/// into the record list the set was built from, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeaningfulRenameSet {
    pub commit: String,
    pub key: ChunkKey,
    pub members: Vec<usize>,
}

impl MeaningfulRenameSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of distinct pre-rename names among the members.
    pub fn unique_old_names(&self, records: &[RenameRecord]) -> usize {
        self.members
            .iter()
            .map(|&i| records[i].old_name.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenameSetCollection {
    pub mode: Mode,
    /// Sorted by (commit, key).
    pub sets: Vec<MeaningfulRenameSet>,
}

impl RenameSetCollection {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Total membership over all sets.
    pub fn member_total(&self) -> usize {
        self.sets.iter().map(MeaningfulRenameSet::len).sum()
    }
}

/// Groups records by (commit, chunk key). A record with several chunks
/// joins several sets; a record with the same chunk twice joins once.
pub fn build_rename_sets(records: &[RenameRecord], mode: Mode) -> RenameSetCollection {
    let mut sets: BTreeMap<(&str, ChunkKey), Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        for chunk in &r.chunks {
            let members = sets.entry((r.commit.as_str(), chunk.key())).or_default();
            if members.last() != Some(&i) {
                members.push(i);
            }
        }
    }
    RenameSetCollection {
        mode,
        sets: sets
            .into_iter()
            .map(|((commit, key), members)| MeaningfulRenameSet {
                commit: String::from(commit),
                key,
                members,
            })
            .collect(),
    }
}

/// Unordered member pairs `(a, b)` with `a < b`, as record indices.
pub fn enumerate_pairs(set: &MeaningfulRenameSet) -> Vec<(usize, usize)> {
    let m = &set.members;
    let mut out = Vec::with_capacity(m.len() * m.len().saturating_sub(1) / 2);
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// Sets of `lemma` whose member set matches no set of `raw`.
pub fn collection_difference<'a>(
    lemma: &'a RenameSetCollection,
    raw: &RenameSetCollection,
) -> Vec<&'a MeaningfulRenameSet> {
    let existing: BTreeSet<&[usize]> = raw.sets.iter().map(|s| s.members.as_slice()).collect();
    lemma
        .sets
        .iter()
        .filter(|s| !existing.contains(s.members.as_slice()))
        .collect()
}
