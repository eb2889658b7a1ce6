//! Rename records and a positional rename detector.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chunks::{diff_chunks_with, Differ, OperationalChunk};
use crate::facts::{CodeFacts, EntityKind};
use crate::lexicon::{Lexicon, LexiconError, Mode};

/// Kinds of renamed identifiers, in ranking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentifierKind {
    Class,
    Method,
    Attribute,
    Parameter,
    Variable,
}

impl IdentifierKind {
    pub const ALL: [IdentifierKind; 5] = [
        IdentifierKind::Class,
        IdentifierKind::Method,
        IdentifierKind::Attribute,
        IdentifierKind::Parameter,
        IdentifierKind::Variable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentifierKind::Class => "Class",
            IdentifierKind::Method => "Method",
            IdentifierKind::Attribute => "Attribute",
            IdentifierKind::Parameter => "Parameter",
            IdentifierKind::Variable => "Variable",
        }
    }
}

impl fmt::Display for IdentifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A kind name outside the five rename kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownKind(pub String);

impl fmt::Display for UnknownKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown identifier kind `{}` (expected Class, Method, Attribute, Parameter or Variable)", self.0)
    }
}

impl FromStr for IdentifierKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentifierKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKind(String::from(s)))
    }
}

/// One identifier rename.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenameRecord {
    pub commit: String,
    pub kind: IdentifierKind,
    #[serde(rename = "old")]
    pub old_name: String,
    #[serde(rename = "new")]
    pub new_name: String,
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub container: Option<String>,
    /// Chunks under the mode last passed to [`RenameRecord::compute_chunks`].
    #[serde(skip)]
    pub chunks: Vec<OperationalChunk>,
}

impl RenameRecord {
    pub fn new(
        commit: &str,
        kind: IdentifierKind,
        old_name: &str,
        new_name: &str,
        file: &str,
    ) -> RenameRecord {
        RenameRecord {
            commit: String::from(commit),
            kind,
            old_name: String::from(old_name),
            new_name: String::from(new_name),
            file: String::from(file),
            container: None,
            chunks: Vec::new(),
        }
    }

    pub fn compute_chunks(&mut self, lexicon: &Lexicon, mode: Mode) -> Result<(), LexiconError> {
        self.compute_chunks_with(&mut Differ::new(), lexicon, mode)
    }

    pub fn compute_chunks_with(
        &mut self,
        differ: &mut Differ,
        lexicon: &Lexicon,
        mode: Mode,
    ) -> Result<(), LexiconError> {
        let old = lexicon.normalize(&self.old_name, mode)?;
        let new = lexicon.normalize(&self.new_name, mode)?;
        self.chunks = diff_chunks_with(differ, &old, &new);
        Ok(())
    }
}

/// Computes chunks for every record; fails on the first invalid name with
/// its record index.
pub fn compute_all_chunks(
    records: &mut [RenameRecord],
    lexicon: &Lexicon,
    mode: Mode,
) -> Result<(), (usize, LexiconError)> {
    let mut differ = Differ::new();
    for (i, r) in records.iter_mut().enumerate() {
        r.compute_chunks_with(&mut differ, lexicon, mode)
            .map_err(|e| (i, e))?;
    }
    Ok(())
}

type Groups<'a> = BTreeMap<(IdentifierKind, String), Vec<&'a str>>;

fn declaration_groups(facts: &CodeFacts) -> Groups<'_> {
    let mut groups: Groups<'_> = BTreeMap::new();
    for e in &facts.entities {
        if e.kind == EntityKind::Method && facts.is_constructor(e.id) {
            continue;
        }
        let key = (e.kind.identifier_kind(), facts.qualified_container(e.id));
        groups.entry(key).or_default().push(&e.name);
    }
    groups
}

/// Renames between two versions of one file, matched by kind, enclosing
/// declaration and position among same-kind siblings.
///
/// Groups whose sibling count changed are left alone, as are positions
/// where the old name survives or the new name already existed. Records
/// carry an empty commit and the file of the `after` facts.
pub fn detect_renames(before: &CodeFacts, after: &CodeFacts) -> Vec<RenameRecord> {
    let old_groups = declaration_groups(before);
    let new_groups = declaration_groups(after);
    let file = after
        .entities
        .first()
        .or(before.entities.first())
        .map(|e| e.file.as_str())
        .unwrap_or("");
    let mut out = Vec::new();
    for (key, old_names) in &old_groups {
        let Some(new_names) = new_groups.get(key) else {
            continue;
        };
        if old_names.len() != new_names.len() {
            continue;
        }
        for (old, new) in old_names.iter().zip(new_names) {
            if old == new || new_names.contains(old) || old_names.contains(new) {
                continue;
            }
            let mut record = RenameRecord::new("", key.0, old, new, file);
            record.container = (!key.1.is_empty()).then(|| key.1.clone());
            out.push(record);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facts::extract_file;

    fn detect(a: &str, b: &str) -> Vec<(IdentifierKind, String, String)> {
        let before = extract_file("F.java", a).unwrap();
        let after = extract_file("F.java", b).unwrap();
        detect_renames(&before, &after)
            .into_iter()
            .map(|r| (r.kind, r.old_name, r.new_name))
            .collect()
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "Method".parse::<IdentifierKind>(),
            Ok(IdentifierKind::Method)
        );
        assert_eq!(
            "Enum".parse::<IdentifierKind>(),
            Err(UnknownKind("Enum".into()))
        );
    }

    #[test]
    fn single_positional_match() {
        assert_eq!(
            detect("class Foo{int a;}", "class Foo{int b;}"),
            [(IdentifierKind::Attribute, "a".into(), "b".into())]
        );
    }

    #[test]
    fn ambiguous_and_identical() {
        assert!(detect("class Foo{}", "class Bar{} class Baz{}").is_empty());
        assert!(detect("class Foo{int a;}", "class Foo{int a;}").is_empty());
        // Swapped names are not renames.
        assert!(detect("class Foo{int a; int b;}", "class Foo{int b; int a;}").is_empty());
    }

    #[test]
    fn constructors_follow_their_class() {
        let found = detect(
            "class Foo{ Foo(int x){} void run(){} }",
            "class Bar{ Bar(int x){} void run(){} }",
        );
        assert_eq!(found, [(IdentifierKind::Class, "Foo".into(), "Bar".into())]);
    }

    #[test]
    fn container_is_recorded() {
        let before = extract_file("F.java", "class A { void m(int x) { int y = x; } }").unwrap();
        let after = extract_file("F.java", "class A { void m(int x) { int z = x; } }").unwrap();
        let found = detect_renames(&before, &after);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].container.as_deref(), Some("A.m"));
        assert_eq!(found[0].kind, IdentifierKind::Variable);
    }

    #[test]
    fn chunks_follow_mode() {
        let lex = Lexicon::bundled();
        let mut r = RenameRecord::new("c", IdentifierKind::Variable, "node", "nodes", "F.java");
        r.compute_chunks(&lex, Mode::Raw).unwrap();
        assert_eq!(r.chunks[0].key().as_str(), "R|node|nodes");
        r.compute_chunks(&lex, Mode::Lemma).unwrap();
        assert_eq!(r.chunks[0].key().as_str(), "F|node|");
    }
}
