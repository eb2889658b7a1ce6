//! Word-level alignment minimizing the number of changed words.
//!
//! Among alignments with the fewest changed words the one with the fewest
//! hunks wins, so matched words form runs that are as long as possible;
//! remaining ties prefer matching (then deleting) at the leftmost position.

use alloc::vec::Vec;
use core::ops::Range;

/// A maximal run of changes between two matched words (or the sequence ends).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hunk {
    pub old: Range<usize>,
    pub new: Range<usize>,
}

impl Hunk {
    pub fn changed_words(&self) -> usize {
        self.old.len() + self.new.len()
    }
}

const STEP: u64 = 1 << 32;

/// Reusable scratch space for [`Differ::hunks`].
#[derive(Debug, Default, Clone)]
pub struct Differ {
    table: Vec<[u64; 2]>,
}

impl Differ {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hunks<T: PartialEq>(&mut self, old: &[T], new: &[T]) -> Vec<Hunk> {
        let (n, m) = (old.len(), new.len());
        let width = m + 1;
        self.table.clear();
        self.table.resize((n + 1) * width, [0; 2]);
        let t = &mut self.table;

        // Cost of aligning old[i..], new[j..]: changed words in the high half,
        // opened hunks in the low half. Index 1 holds the cost when a hunk is
        // already open, index 0 when one would have to be opened.
        for j in (0..m).rev() {
            let edit = t[n * width + j + 1][1] + STEP;
            t[n * width + j] = [edit + 1, edit];
        }
        for i in (0..n).rev() {
            let (row, below) = t[i * width..(i + 2) * width].split_at_mut(width);
            let edit = below[m][1] + STEP;
            row[m] = [edit + 1, edit];
            for j in (0..m).rev() {
                let matched = if old[i] == new[j] {
                    below[j + 1][0]
                } else {
                    u64::MAX
                };
                let edit = below[j][1].min(row[j + 1][1]) + STEP;
                row[j] = [matched.min(edit + 1), matched.min(edit)];
            }
        }
        let at = |i: usize, j: usize, gap: usize| t[i * width + j][gap];

        let mut hunks = Vec::new();
        let mut current: Option<Hunk> = None;
        let (mut i, mut j, mut gap) = (0, 0, 0);
        while i < n || j < m {
            let here = at(i, j, gap);
            let open = (1 - gap) as u64;
            if i < n && j < m && old[i] == new[j] && at(i + 1, j + 1, 0) == here {
                hunks.extend(current.take());
                i += 1;
                j += 1;
                gap = 0;
                continue;
            }
            let hunk = current.get_or_insert(Hunk {
                old: i..i,
                new: j..j,
            });
            if i < n && at(i + 1, j, 1) + STEP + open == here {
                i += 1;
                hunk.old.end = i;
            } else {
                j += 1;
                hunk.new.end = j;
            }
            gap = 1;
        }
        hunks.extend(current);
        hunks
    }
}

/// Minimal-change hunks between two sequences.
pub fn diff_hunks<T: PartialEq>(old: &[T], new: &[T]) -> Vec<Hunk> {
    Differ::new().hunks(old, new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(old: Range<usize>, new: Range<usize>) -> Hunk {
        Hunk { old, new }
    }

    #[test]
    fn identical_sequences_have_no_hunks() {
        assert!(diff_hunks(&["a", "b"], &["a", "b"]).is_empty());
        assert!(diff_hunks::<u8>(&[], &[]).is_empty());
    }

    #[test]
    fn greedy_longest_run_is_not_minimal_here() {
        // Matching the leftmost `a` first would leave three changes per side.
        let hunks = diff_hunks(&["a", "b", "a"], &["b", "c", "a"]);
        assert_eq!(hunks, [h(0..1, 0..0), h(2..2, 1..2)]);
    }

    #[test]
    fn prefers_single_hunk_replacements() {
        let hunks = diff_hunks(&["type", "attribute"], &["attribute", "attribute"]);
        assert_eq!(hunks, [h(0..1, 0..1)]);
    }

    #[test]
    fn insertion_and_deletion() {
        assert_eq!(
            diff_hunks(
                &["data", "provider", "id"],
                &["data", "provider", "instance", "id"]
            ),
            [h(2..2, 2..3)]
        );
        assert_eq!(
            diff_hunks(&["minimum", "version"], &["version", "spec"]),
            [h(0..1, 0..0), h(2..2, 1..2)]
        );
    }

    #[test]
    fn scratch_reuse_gives_same_answer() {
        let mut differ = Differ::new();
        let a = differ.hunks(&[1, 2, 3, 4], &[2, 3, 5]);
        let _ = differ.hunks(&[9; 7], &[8; 2]);
        assert_eq!(differ.hunks(&[1, 2, 3, 4], &[2, 3, 5]), a);
    }
}
