//! Mining and recommending co-renamed identifiers.
//!
//! The crate is `no_std` (with `alloc`) and holds the pure pipeline:
//!
//! - [`lexicon`] splits identifiers into words and lemmatizes them,
//! - [`chunks`] diffs word sequences into operational chunks and re-applies them,
//! - [`mining`] defines rename records and a positional rename detector,
//! - [`grouping`] builds meaningful rename sets per (commit, chunk),
//! - [`facts`] extracts structural facts from Java sources and detects the
//!   fourteen identifier relationships,
//! - [`analytics`] computes co-rename, chunk and relationship rates,
//! - [`recommend`] proposes and ranks co-rename candidates for a rename.
//!
//! File formats, history walking and the command line live in the
//! `corename` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytics;
pub mod chunks;
pub mod facts;
pub mod grouping;
pub mod lexicon;
pub mod mining;
pub mod recommend;

pub use chunks::{ChunkKey, ChunkKind, OperationalChunk};
pub use facts::{CodeFacts, RelationIndex, RelationSet, RelationshipKind};
pub use grouping::{MeaningfulRenameSet, RenameSetCollection};
pub use lexicon::{Casing, Lexicon, Mode, Word, WordSequence};
pub use mining::{IdentifierKind, RenameRecord};
