//! The fourteen name-level relationships and an index for looking them up.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CodeFacts, EntityId, EntityKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationshipKind {
    BelongsC,
    BelongsM,
    BelongsF,
    BelongsA,
    BelongsL,
    CoOccursM,
    Extends,
    Implements,
    TypeM,
    TypeV,
    Invokes,
    Accesses,
    Assigns,
    Passes,
}

/// Which group a relationship belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationshipCategory {
    Location,
    Type,
    Dependency,
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 14] = [
        RelationshipKind::BelongsC,
        RelationshipKind::BelongsM,
        RelationshipKind::BelongsF,
        RelationshipKind::BelongsA,
        RelationshipKind::BelongsL,
        RelationshipKind::CoOccursM,
        RelationshipKind::Extends,
        RelationshipKind::Implements,
        RelationshipKind::TypeM,
        RelationshipKind::TypeV,
        RelationshipKind::Invokes,
        RelationshipKind::Accesses,
        RelationshipKind::Assigns,
        RelationshipKind::Passes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationshipKind::BelongsC => "BelongsC",
            RelationshipKind::BelongsM => "BelongsM",
            RelationshipKind::BelongsF => "BelongsF",
            RelationshipKind::BelongsA => "BelongsA",
            RelationshipKind::BelongsL => "BelongsL",
            RelationshipKind::CoOccursM => "CoOccursM",
            RelationshipKind::Extends => "Extends",
            RelationshipKind::Implements => "Implements",
            RelationshipKind::TypeM => "TypeM",
            RelationshipKind::TypeV => "TypeV",
            RelationshipKind::Invokes => "Invokes",
            RelationshipKind::Accesses => "Accesses",
            RelationshipKind::Assigns => "Assigns",
            RelationshipKind::Passes => "Passes",
        }
    }

    pub fn category(self) -> RelationshipCategory {
        use RelationshipKind::*;
        match self {
            BelongsC | BelongsM | BelongsF | BelongsA | BelongsL | CoOccursM => {
                RelationshipCategory::Location
            }
            Extends | Implements | TypeM | TypeV => RelationshipCategory::Type,
            Invokes | Accesses | Assigns | Passes => RelationshipCategory::Dependency,
        }
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationshipKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationshipKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| alloc::format!("unknown relationship `{s}`"))
    }
}

/// The catalog of predicates, one per kind, first argument first.
pub fn relationship_table() -> Vec<(RelationshipKind, &'static str)> {
    use RelationshipKind::*;
    alloc::vec![
        (BelongsC, "class c declares inner class d"),
        (BelongsM, "class c declares method m"),
        (BelongsF, "class c declares attribute f"),
        (BelongsA, "method m declares parameter p"),
        (BelongsL, "method m declares local variable v"),
        (CoOccursM, "methods m1 and m2 are declared in the same class"),
        (Extends, "class d directly extends class c"),
        (Implements, "class c implements interface i"),
        (TypeM, "method m returns type t (outer type or a type argument)"),
        (TypeV, "attribute, parameter or variable v has type t (outer type or a type argument)"),
        (Invokes, "method m1 invokes method m2, m1 and m2 differently named"),
        (Accesses, "method m references attribute f of its own class"),
        (Assigns, "assignment with left side v and right side attribute, parameter, variable or invocation w"),
        (Passes, "argument a is passed to formal parameter p of a same-name, same-arity method"),
    ]
}

/// A set of relationship kinds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSet(u16);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);

    pub fn insert(&mut self, kind: RelationshipKind) {
        self.0 |= kind.bit();
    }

    pub fn contains(self, kind: RelationshipKind) -> bool {
        self.0 & kind.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = RelationshipKind> {
        RelationshipKind::ALL
            .into_iter()
            .filter(move |k| self.contains(*k))
    }
}

impl FromIterator<RelationshipKind> for RelationSet {
    fn from_iter<I: IntoIterator<Item = RelationshipKind>>(iter: I) -> Self {
        let mut set = RelationSet::EMPTY;
        for k in iter {
            set.insert(k);
        }
        set
    }
}

impl Serialize for RelationSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for k in self.iter() {
            seq.serialize_element(&k)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RelationSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SetVisitor;
        impl<'de> Visitor<'de> for SetVisitor {
            type Value = RelationSet;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of relationship kinds")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<RelationSet, A::Error> {
                let mut set = RelationSet::EMPTY;
                while let Some(k) = seq.next_element::<RelationshipKind>()? {
                    set.insert(k);
                }
                Ok(set)
            }
        }
        deserializer
            .deserialize_seq(SetVisitor)
            .map_err(de::Error::custom)
    }
}

/// Relationship lookup by pairs of names, symmetric in its arguments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationIndex {
    pairs: BTreeMap<String, BTreeMap<String, RelationSet>>,
}

impl RelationIndex {
    pub fn build(facts: &CodeFacts) -> RelationIndex {
        use RelationshipKind::*;
        let mut index = RelationIndex::default();
        let by_id: BTreeMap<EntityId, &super::Entity> =
            facts.entities.iter().map(|e| (e.id, e)).collect();
        let container = |e: &super::Entity| e.container.and_then(|c| by_id.get(&c).copied());
        let is_constructor = |e: &super::Entity| {
            e.kind == EntityKind::Method && container(e).is_some_and(|c| c.name == e.name)
        };
        let is_method = |e: &super::Entity| e.kind == EntityKind::Method && !is_constructor(e);

        let mut methods_of: BTreeMap<EntityId, Vec<&str>> = BTreeMap::new();
        for e in &facts.entities {
            let Some(c) = container(e) else { continue };
            let kind = match (c.kind, e.kind) {
                (ck, ek) if ck.is_type() && ek.is_type() => Some(BelongsC),
                (ck, EntityKind::Method) if ck.is_type() && is_method(e) => {
                    methods_of.entry(c.id).or_default().push(&e.name);
                    Some(BelongsM)
                }
                (ck, EntityKind::Attribute) if ck.is_type() => Some(BelongsF),
                (EntityKind::Method, EntityKind::Parameter) if is_method(c) => Some(BelongsA),
                (EntityKind::Method, EntityKind::Variable) if is_method(c) => Some(BelongsL),
                _ => None,
            };
            if let Some(kind) = kind {
                index.add(&c.name, &e.name, kind);
            }
        }
        for methods in methods_of.values() {
            for (i, a) in methods.iter().enumerate() {
                for b in &methods[i + 1..] {
                    index.add(a, b, CoOccursM);
                }
            }
        }
        let name_of = |id: EntityId| by_id.get(&id).map(|e| e.name.as_str());
        for row in &facts.extends {
            if let Some(sub) = name_of(row.entity) {
                index.add(&row.name, sub, Extends);
            }
        }
        for row in &facts.implements {
            if let Some(class) = name_of(row.entity) {
                index.add(&row.name, class, Implements);
            }
        }
        for row in &facts.returns {
            if let Some(m) = by_id.get(&row.entity).filter(|e| is_method(e)) {
                index.add(&m.name, &row.type_name, TypeM);
            }
        }
        for row in &facts.typed {
            if let Some(v) = name_of(row.entity) {
                index.add(v, &row.type_name, TypeV);
            }
        }
        for row in &facts.invokes {
            if let Some(m) = by_id.get(&row.entity).filter(|e| is_method(e)) {
                if m.name != row.name {
                    index.add(&m.name, &row.name, Invokes);
                }
            }
        }
        for row in &facts.accesses {
            if let Some(m) = by_id.get(&row.entity).filter(|e| is_method(e)) {
                index.add(&m.name, &row.name, Accesses);
            }
        }
        for row in &facts.assigns {
            index.add(&row.lhs, &row.rhs, Assigns);
        }
        for row in &facts.passes {
            index.add(&row.formal, &row.actual, Passes);
        }
        index
    }

    fn add(&mut self, a: &str, b: &str, kind: RelationshipKind) {
        for (x, y) in [(a, b), (b, a)] {
            let inner = match self.pairs.get_mut(x) {
                Some(inner) => inner,
                None => self.pairs.entry(String::from(x)).or_default(),
            };
            match inner.get_mut(y) {
                Some(set) => set.insert(kind),
                None => {
                    inner.insert(String::from(y), RelationSet::from_iter([kind]));
                }
            }
        }
    }

    /// Kinds holding between two names in either orientation.
    pub fn get(&self, a: &str, b: &str) -> RelationSet {
        self.pairs
            .get(a)
            .and_then(|inner| inner.get(b))
            .copied()
            .unwrap_or_default()
    }

    /// Every name related to `name`, with the kinds.
    pub fn related(&self, name: &str) -> impl Iterator<Item = (&str, RelationSet)> {
        self.pairs
            .get(name)
            .into_iter()
            .flat_map(|inner| inner.iter().map(|(k, v)| (k.as_str(), *v)))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Relationships between two names in `facts`. Builds a fresh index; use
/// [`RelationIndex`] directly for repeated queries.
pub fn detect_relationships(facts: &CodeFacts, a: &str, b: &str) -> RelationSet {
    RelationIndex::build(facts).get(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facts::extract_file;

    #[test]
    fn fourteen_kinds_in_catalog_order() {
        let table = relationship_table();
        assert_eq!(table.len(), 14);
        for (i, (k, _)) in table.iter().enumerate() {
            assert_eq!(*k, RelationshipKind::ALL[i]);
            assert_eq!(k.name().parse::<RelationshipKind>(), Ok(*k));
        }
    }

    #[test]
    fn set_operations() {
        let mut s = RelationSet::EMPTY;
        assert!(s.is_empty());
        s.insert(RelationshipKind::TypeV);
        s.insert(RelationshipKind::Passes);
        s.insert(RelationshipKind::TypeV);
        assert_eq!(s.len(), 2);
        assert_eq!(
            s.iter().collect::<Vec<_>>(),
            [RelationshipKind::TypeV, RelationshipKind::Passes]
        );
    }

    #[test]
    fn constructors_are_not_methods_for_location() {
        let f = extract_file(
            "A.java",
            "class A { int f; A(int p) { f = p; } void m() {} void n() {} }",
        )
        .unwrap();
        let index = RelationIndex::build(&f);
        assert!(!index.get("A", "A").contains(RelationshipKind::BelongsM));
        assert!(!index.get("A", "m").contains(RelationshipKind::CoOccursM));
        assert!(!index.get("A", "p").contains(RelationshipKind::BelongsA));
        assert!(index.get("m", "n").contains(RelationshipKind::CoOccursM));
        assert!(index.get("f", "p").contains(RelationshipKind::Assigns));
    }
}
