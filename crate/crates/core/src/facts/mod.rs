//! Structural facts extracted from Java sources, and the relationships
//! between identifier names that those facts support.
//!
//! Every table is keyed by names as written in the source; no symbol
//! resolution takes place. Two entities with the same name in different
//! scopes are therefore indistinguishable to the relationship queries.

mod java;
mod lexer;
mod relations;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::mining::IdentifierKind;

pub use java::{extract_file, SkippedFile};
pub use relations::{
    detect_relationships, relationship_table, RelationIndex, RelationSet, RelationshipKind,
};

pub type EntityId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Class,
    Interface,
    Method,
    Attribute,
    Parameter,
    Variable,
}

impl EntityKind {
    /// The rename kind a declaration of this kind produces.
    pub fn identifier_kind(self) -> IdentifierKind {
        match self {
            EntityKind::Class | EntityKind::Interface => IdentifierKind::Class,
            EntityKind::Method => IdentifierKind::Method,
            EntityKind::Attribute => IdentifierKind::Attribute,
            EntityKind::Parameter => IdentifierKind::Parameter,
            EntityKind::Variable => IdentifierKind::Variable,
        }
    }

    pub fn is_type(self) -> bool {
        matches!(self, EntityKind::Class | EntityKind::Interface)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub container: Option<EntityId>,
    pub file: String,
    pub line: u32,
}

/// Syntactic form of the right-hand side of an assignment or of an argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueForm {
    Attribute,
    Parameter,
    Variable,
    Invocation,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeRow {
    pub entity: EntityId,
    #[serde(rename = "type")]
    pub type_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NameRow {
    pub entity: EntityId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AssignRow {
    pub lhs: String,
    pub rhs: String,
    pub form: ValueForm,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PassRow {
    pub formal: String,
    pub actual: String,
    pub form: ValueForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argument {
    pub name: String,
    pub form: ValueForm,
}

/// A call site before its arguments are paired with formal parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallRow {
    pub callee: String,
    /// One slot per argument; `None` for arguments that are not a plain
    /// name, field access or invocation.
    pub args: Vec<Option<Argument>>,
}

/// Entity and relation tables for one or more source files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFacts {
    pub entities: Vec<Entity>,
    /// (container, child) for every entity with a container.
    pub contains: Vec<(EntityId, EntityId)>,
    pub extends: Vec<NameRow>,
    pub implements: Vec<NameRow>,
    pub typed: Vec<TypeRow>,
    pub returns: Vec<TypeRow>,
    pub invokes: Vec<NameRow>,
    pub accesses: Vec<NameRow>,
    pub assigns: Vec<AssignRow>,
    pub passes: Vec<PassRow>,
    #[serde(default)]
    pub calls: Vec<CallRow>,
}

/// A source file for [`extract_facts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactsError {
    UnknownEntity(EntityId),
    DuplicateEntity(EntityId),
}

impl fmt::Display for FactsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactsError::UnknownEntity(id) => write!(f, "reference to unknown entity {id}"),
            FactsError::DuplicateEntity(id) => write!(f, "entity id {id} declared twice"),
        }
    }
}

impl CodeFacts {
    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entity(&self, id: EntityId) -> Option<&Entity> {
        // Ids are dense and ordered for extracted facts; fall back to a scan
        // for hand-written tables.
        match self.entities.get(id as usize) {
            Some(e) if e.id == id => Some(e),
            _ => self.entities.iter().find(|e| e.id == id),
        }
    }

    /// Names of the enclosing declarations, outermost first, joined by `.`.
    pub fn qualified_container(&self, id: EntityId) -> String {
        let mut names = Vec::new();
        let mut current = self.entity(id).and_then(|e| e.container);
        while let Some(c) = current {
            let Some(e) = self.entity(c) else { break };
            names.push(e.name.as_str());
            current = e.container;
        }
        names.reverse();
        names.join(".")
    }

    /// Whether `id` is a constructor, i.e. a method named after its class.
    pub fn is_constructor(&self, id: EntityId) -> bool {
        let Some(e) = self.entity(id) else {
            return false;
        };
        e.kind == EntityKind::Method
            && e.container
                .and_then(|c| self.entity(c))
                .is_some_and(|c| c.kind.is_type() && c.name == e.name)
    }

    /// Checks that every referenced entity exists and ids are unique.
    pub fn validate(&self) -> Result<(), FactsError> {
        let mut seen = BTreeMap::new();
        for e in &self.entities {
            if seen.insert(e.id, ()).is_some() {
                return Err(FactsError::DuplicateEntity(e.id));
            }
        }
        let check = |id: EntityId| {
            if seen.contains_key(&id) {
                Ok(())
            } else {
                Err(FactsError::UnknownEntity(id))
            }
        };
        for e in &self.entities {
            if let Some(c) = e.container {
                check(c)?;
            }
        }
        for &(a, b) in &self.contains {
            check(a)?;
            check(b)?;
        }
        for row in self
            .extends
            .iter()
            .chain(&self.implements)
            .chain(&self.invokes)
            .chain(&self.accesses)
        {
            check(row.entity)?;
        }
        for row in self.typed.iter().chain(&self.returns) {
            check(row.entity)?;
        }
        Ok(())
    }

    /// Appends `other`, renumbering its entities after ours. Pass rows are
    /// not recomputed; call [`CodeFacts::resolve_passes`] afterwards.
    pub fn append(&mut self, other: CodeFacts) {
        let offset = self.entities.iter().map(|e| e.id + 1).max().unwrap_or(0);
        let shift = |id: EntityId| id + offset;
        self.entities
            .extend(other.entities.into_iter().map(|mut e| {
                e.id = shift(e.id);
                e.container = e.container.map(shift);
                e
            }));
        self.contains.extend(
            other
                .contains
                .into_iter()
                .map(|(a, b)| (shift(a), shift(b))),
        );
        let shift_names = |rows: Vec<NameRow>| {
            rows.into_iter().map(move |mut r| {
                r.entity = shift(r.entity);
                r
            })
        };
        self.extends.extend(shift_names(other.extends));
        self.implements.extend(shift_names(other.implements));
        self.invokes.extend(shift_names(other.invokes));
        self.accesses.extend(shift_names(other.accesses));
        let shift_types = |rows: Vec<TypeRow>| {
            rows.into_iter().map(move |mut r| {
                r.entity = shift(r.entity);
                r
            })
        };
        self.typed.extend(shift_types(other.typed));
        self.returns.extend(shift_types(other.returns));
        self.assigns.extend(other.assigns);
        self.calls.extend(other.calls);
    }

    /// Pairs every call's arguments with the formal parameters of each
    /// declared method of the same name and arity.
    pub fn resolve_passes(&mut self) {
        let mut formals: BTreeMap<(&str, usize), Vec<Vec<&str>>> = BTreeMap::new();
        let mut params: BTreeMap<EntityId, Vec<&str>> = BTreeMap::new();
        for e in &self.entities {
            if e.kind == EntityKind::Parameter {
                if let Some(m) = e.container {
                    params.entry(m).or_default().push(&e.name);
                }
            }
        }
        for e in self
            .entities
            .iter()
            .filter(|e| e.kind == EntityKind::Method)
        {
            let list = params.remove(&e.id).unwrap_or_default();
            let slot = formals.entry((e.name.as_str(), list.len())).or_default();
            if !slot.contains(&list) {
                slot.push(list);
            }
        }
        let mut passes = Vec::new();
        for call in &self.calls {
            let Some(candidates) = formals.get(&(call.callee.as_str(), call.args.len())) else {
                continue;
            };
            for list in candidates {
                for (formal, arg) in list.iter().zip(&call.args) {
                    if let Some(arg) = arg {
                        passes.push(PassRow {
                            formal: String::from(*formal),
                            actual: arg.name.clone(),
                            form: arg.form,
                        });
                    }
                }
            }
        }
        passes.sort();
        passes.dedup();
        self.passes = passes;
    }

    /// Merges per-file facts in the given order and resolves passes.
    pub fn merge<I: IntoIterator<Item = CodeFacts>>(parts: I) -> CodeFacts {
        let mut all = CodeFacts::default();
        for part in parts {
            all.append(part);
        }
        all.resolve_passes();
        all
    }
}

/// Extracts facts from a set of files. Files are processed in path order;
/// files outside the supported subset are skipped and reported.
pub fn extract_facts(sources: &[SourceFile]) -> (CodeFacts, Vec<SkippedFile>) {
    let mut ordered: Vec<&SourceFile> = sources.iter().collect();
    ordered.sort_by(|a, b| a.path.cmp(&b.path));
    let mut parts = Vec::new();
    let mut skipped = Vec::new();
    for file in ordered {
        match extract_file(&file.path, &file.text) {
            Ok(facts) => parts.push(facts),
            Err(s) => skipped.push(s),
        }
    }
    (CodeFacts::merge(parts), skipped)
}
