//! Operational chunks: typed word-level edits extracted from a rename.

mod apply;
mod diff;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::WordSequence;

pub use apply::{apply_chunk, ChunkError};
pub use diff::{diff_hunks, Differ, Hunk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChunkKind {
    Insert,
    Delete,
    Replace,
    Other,
    Inflect,
}

impl ChunkKind {
    pub const ALL: [ChunkKind; 5] = [
        ChunkKind::Insert,
        ChunkKind::Delete,
        ChunkKind::Replace,
        ChunkKind::Other,
        ChunkKind::Inflect,
    ];

    pub fn tag(self) -> char {
        match self {
            ChunkKind::Insert => 'I',
            ChunkKind::Delete => 'D',
            ChunkKind::Replace => 'R',
            ChunkKind::Other => 'O',
            ChunkKind::Inflect => 'F',
        }
    }

    pub fn from_tag(tag: char) -> Option<ChunkKind> {
        ChunkKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    pub fn name(self) -> &'static str {
        match self {
            ChunkKind::Insert => "Insert",
            ChunkKind::Delete => "Delete",
            ChunkKind::Replace => "Replace",
            ChunkKind::Other => "Other",
            ChunkKind::Inflect => "Inflect",
        }
    }
}

/// Neighbouring word that anchors an insertion when it is re-applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertContext {
    /// Inserted right after this word.
    After(String),
    /// Inserted right before this word (insertion at the front).
    Before(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationalChunk {
    pub kind: ChunkKind,
    pub deleted: Vec<String>,
    pub added: Vec<String>,
    /// Left boundary of the chunk in the old word sequence.
    pub anchor: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<InsertContext>,
}

impl OperationalChunk {
    pub fn insert(added: Vec<String>, anchor: usize, context: Option<InsertContext>) -> Self {
        OperationalChunk {
            kind: ChunkKind::Insert,
            deleted: Vec::new(),
            added,
            anchor,
            context,
        }
    }

    pub fn delete(deleted: Vec<String>, anchor: usize) -> Self {
        OperationalChunk {
            kind: ChunkKind::Delete,
            deleted,
            added: Vec::new(),
            anchor,
            context: None,
        }
    }

    pub fn replace(deleted: Vec<String>, added: Vec<String>, anchor: usize) -> Self {
        OperationalChunk {
            kind: ChunkKind::Replace,
            deleted,
            added,
            anchor,
            context: None,
        }
    }

    pub fn key(&self) -> ChunkKey {
        chunk_key(self)
    }

    /// Number of words this chunk changes.
    pub fn changed_words(&self) -> usize {
        match self.kind {
            ChunkKind::Other | ChunkKind::Inflect => 0,
            _ => self.deleted.len() + self.added.len(),
        }
    }
}

impl fmt::Display for OperationalChunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChunkKind::Insert => write!(f, "Insert({})", self.added.join(" ")),
            ChunkKind::Replace => {
                write!(
                    f,
                    "Replace({}→{})",
                    self.deleted.join(" "),
                    self.added.join(" ")
                )
            }
            kind => write!(f, "{}({})", kind.name(), self.deleted.join(" ")),
        }
    }
}

/// Canonical identity of a chunk: `tag|deleted+lemmas|added+lemmas`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChunkKey(String);

impl ChunkKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> Option<ChunkKind> {
        self.0.chars().next().and_then(ChunkKind::from_tag)
    }

    /// Parses a serialized key, checking its shape.
    pub fn parse(s: &str) -> Option<ChunkKey> {
        let mut parts = s.split('|');
        let tag = parts.next()?;
        let (_, _) = (parts.next()?, parts.next()?);
        if parts.next().is_some() || tag.chars().count() != 1 {
            return None;
        }
        ChunkKind::from_tag(tag.chars().next()?)?;
        Some(ChunkKey(String::from(s)))
    }
}

impl fmt::Display for ChunkKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn chunk_key(chunk: &OperationalChunk) -> ChunkKey {
    let mut s = String::new();
    s.push(chunk.kind.tag());
    s.push('|');
    s.push_str(&chunk.deleted.join("+"));
    s.push('|');
    s.push_str(&chunk.added.join("+"));
    ChunkKey(s)
}

fn owned(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| String::from(*w)).collect()
}

/// Chunks turning `old` into `new`, left to right.
///
/// Both sequences must be normalized in the same mode. The diff runs over
/// lemmas; when the lemma sequences are equal, words are compared position
/// by position and each folded-form difference becomes `Inflect`, each
/// casing-only difference `Other`.
pub fn diff_chunks(old: &WordSequence, new: &WordSequence) -> Vec<OperationalChunk> {
    diff_chunks_with(&mut Differ::new(), old, new)
}

pub fn diff_chunks_with(
    differ: &mut Differ,
    old: &WordSequence,
    new: &WordSequence,
) -> Vec<OperationalChunk> {
    let old_lemmas = old.lemmas();
    let new_lemmas = new.lemmas();
    let hunks = differ.hunks(&old_lemmas, &new_lemmas);

    if hunks.is_empty() {
        return old
            .words
            .iter()
            .zip(&new.words)
            .enumerate()
            .filter_map(|(i, (o, n))| {
                let kind = if o.folded != n.folded {
                    ChunkKind::Inflect
                } else if o.surface != n.surface {
                    ChunkKind::Other
                } else {
                    return None;
                };
                Some(OperationalChunk {
                    kind,
                    deleted: alloc::vec![o.lemma.clone()],
                    added: Vec::new(),
                    anchor: i,
                    context: None,
                })
            })
            .collect();
    }

    hunks
        .into_iter()
        .map(|hunk| {
            let deleted = owned(&old_lemmas[hunk.old.clone()]);
            let added = owned(&new_lemmas[hunk.new.clone()]);
            let anchor = hunk.old.start;
            match (deleted.is_empty(), added.is_empty()) {
                (false, false) => OperationalChunk::replace(deleted, added, anchor),
                (false, true) => OperationalChunk::delete(deleted, anchor),
                _ => {
                    let context = if anchor > 0 {
                        Some(InsertContext::After(String::from(old_lemmas[anchor - 1])))
                    } else {
                        old_lemmas
                            .get(anchor)
                            .map(|w| InsertContext::Before(String::from(*w)))
                    };
                    OperationalChunk::insert(added, anchor, context)
                }
            }
        })
        .collect()
}

/// Applies chunks at their anchors to an old lemma sequence.
pub fn replay<S: AsRef<str>>(chunks: &[OperationalChunk], old: &[S]) -> Vec<String> {
    let mut words: Vec<String> = old.iter().map(|w| String::from(w.as_ref())).collect();
    let mut ordered: Vec<&OperationalChunk> = chunks.iter().collect();
    ordered.sort_by_key(|c| core::cmp::Reverse(c.anchor));
    for chunk in ordered {
        let at = chunk.anchor.min(words.len());
        match chunk.kind {
            ChunkKind::Insert | ChunkKind::Delete | ChunkKind::Replace => {
                let end = (at + chunk.deleted.len()).min(words.len());
                words.splice(at..end, chunk.added.iter().cloned());
            }
            ChunkKind::Other | ChunkKind::Inflect => {}
        }
    }
    words
}
