//! Co-rename candidates for a performed rename, ranked by relationship
//! priors that depend on the kind of the renamed identifier.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::analytics::Measured;
use crate::chunks::apply_chunk;
use crate::facts::{CodeFacts, EntityId, RelationIndex, RelationSet, RelationshipKind};
use crate::lexicon::{Lexicon, Mode};
use crate::mining::{IdentifierKind, RenameRecord};

/// Weight of each relationship kind, per kind of renamed identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorProfile {
    pub weights: BTreeMap<IdentifierKind, BTreeMap<RelationshipKind, f64>>,
    /// Score of a candidate without any relationship.
    #[serde(default)]
    pub default_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileError {
    NoData,
    InvalidWeight {
        kind: IdentifierKind,
        relationship: RelationshipKind,
        weight: f64,
    },
    InvalidDefault(f64),
    NoPositiveWeight(IdentifierKind),
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::NoData => f.write_str("no relationship rates to build a profile from"),
            ProfileError::InvalidWeight {
                kind,
                relationship,
                weight,
            } => {
                write!(
                    f,
                    "weight {weight} for {kind}/{relationship} is not a finite non-negative number"
                )
            }
            ProfileError::InvalidDefault(w) => {
                write!(f, "default weight {w} is not a finite non-negative number")
            }
            ProfileError::NoPositiveWeight(kind) => write!(f, "no positive weight for {kind}"),
        }
    }
}

/// Weights of the shipped profile: the two overall leaders for every kind,
/// a small floor for the other kinds, and a boost for the relationship
/// that leads for each particular kind.
const LEADERS: [(RelationshipKind, f64); 2] = [
    (RelationshipKind::CoOccursM, 0.408),
    (RelationshipKind::Assigns, 0.259),
];
const FLOOR: f64 = 0.025;
const KIND_BOOST: f64 = 0.259;

impl PriorProfile {
    pub fn bundled() -> PriorProfile {
        let mut weights = BTreeMap::new();
        for kind in IdentifierKind::ALL {
            let mut w: BTreeMap<RelationshipKind, f64> = RelationshipKind::ALL
                .into_iter()
                .map(|k| (k, FLOOR))
                .collect();
            w.extend(LEADERS);
            let boosted = match kind {
                IdentifierKind::Class => Some(RelationshipKind::TypeV),
                IdentifierKind::Attribute => Some(RelationshipKind::Accesses),
                IdentifierKind::Parameter | IdentifierKind::Variable => {
                    Some(RelationshipKind::Passes)
                }
                IdentifierKind::Method => None,
            };
            if let Some(b) = boosted {
                w.insert(b, KIND_BOOST);
            }
            weights.insert(kind, w);
        }
        PriorProfile {
            weights,
            default_weight: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let ok = |w: f64| w.is_finite() && w >= 0.0;
        if !ok(self.default_weight) {
            return Err(ProfileError::InvalidDefault(self.default_weight));
        }
        for (&kind, map) in &self.weights {
            for (&relationship, &weight) in map {
                if !ok(weight) {
                    return Err(ProfileError::InvalidWeight {
                        kind,
                        relationship,
                        weight,
                    });
                }
            }
            if !map.values().any(|&w| w > 0.0) {
                return Err(ProfileError::NoPositiveWeight(kind));
            }
        }
        Ok(())
    }

    pub fn weight(&self, trigger: IdentifierKind, relationship: RelationshipKind) -> f64 {
        self.weights
            .get(&trigger)
            .and_then(|m| m.get(&relationship))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn score(&self, trigger: IdentifierKind, relationships: RelationSet) -> f64 {
        if relationships.is_empty() {
            return self.default_weight;
        }
        relationships.iter().map(|k| self.weight(trigger, k)).sum()
    }
}

/// Profile whose weights are the filtered relationship rates per kind.
/// Kinds without data are left out.
pub fn build_prior_profile(
    rates: &BTreeMap<IdentifierKind, Measured<BTreeMap<RelationshipKind, f64>>>,
    default_weight: f64,
) -> Result<PriorProfile, ProfileError> {
    let weights: BTreeMap<IdentifierKind, BTreeMap<RelationshipKind, f64>> = rates
        .iter()
        .filter_map(|(&k, m)| m.value().map(|map| (k, map.clone())))
        .filter(|(_, map)| map.values().any(|&w| w > 0.0))
        .collect();
    if weights.is_empty() {
        return Err(ProfileError::NoData);
    }
    let profile = PriorProfile {
        weights,
        default_weight,
    };
    profile.validate()?;
    Ok(profile)
}

/// Where a candidate identifier is declared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateTarget {
    pub name: String,
    pub kind: IdentifierKind,
    pub file: String,
    pub line: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub container: String,
    #[serde(skip)]
    pub entity: EntityId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationCandidate {
    pub target: CandidateTarget,
    pub proposed_name: String,
    pub relationships: RelationSet,
    pub score: f64,
}

/// Candidates from applying each chunk of `rename` to every declared
/// identifier except those named like the renamed one. Scores are zero
/// until [`rank_candidates`].
pub fn generate_candidates(
    rename: &RenameRecord,
    facts: &CodeFacts,
    index: &RelationIndex,
    lexicon: &Lexicon,
    mode: Mode,
) -> Vec<RecommendationCandidate> {
    let mut out: BTreeMap<(EntityId, String), RecommendationCandidate> = BTreeMap::new();
    for entity in &facts.entities {
        if entity.name == rename.old_name || facts.is_constructor(entity.id) {
            continue;
        }
        let Ok(target) = lexicon.normalize(&entity.name, mode) else {
            continue;
        };
        for chunk in &rename.chunks {
            let Ok(results) = apply_chunk(chunk, &target) else {
                continue;
            };
            for result in results {
                if result.origin == entity.name {
                    continue;
                }
                out.entry((entity.id, result.origin.clone()))
                    .or_insert_with(|| RecommendationCandidate {
                        target: CandidateTarget {
                            name: entity.name.clone(),
                            kind: entity.kind.identifier_kind(),
                            file: entity.file.clone(),
                            line: entity.line,
                            container: facts.qualified_container(entity.id),
                            entity: entity.id,
                        },
                        proposed_name: result.origin,
                        relationships: index.get(&rename.old_name, &entity.name),
                        score: 0.0,
                    });
            }
        }
    }
    out.into_values().collect()
}

fn order(a: &RecommendationCandidate, b: &RecommendationCandidate) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.target.kind.cmp(&b.target.kind))
        .then_with(|| a.target.name.cmp(&b.target.name))
        .then_with(|| a.target.file.cmp(&b.target.file))
        .then(a.target.line.cmp(&b.target.line))
        .then_with(|| a.proposed_name.cmp(&b.proposed_name))
}

/// Scores candidates for a rename of kind `trigger` and sorts them best
/// first. With `min_score`, candidates scoring below it are dropped.
pub fn rank_candidates(
    mut candidates: Vec<RecommendationCandidate>,
    profile: &PriorProfile,
    trigger: IdentifierKind,
    min_score: Option<f64>,
) -> Vec<RecommendationCandidate> {
    for c in &mut candidates {
        c.score = profile.score(trigger, c.relationships);
    }
    if let Some(min) = min_score {
        candidates.retain(|c| c.score >= min);
    }
    candidates.sort_by(order);
    candidates
}

/// Generates and ranks candidates in one step.
pub fn recommend(
    rename: &RenameRecord,
    facts: &CodeFacts,
    index: &RelationIndex,
    lexicon: &Lexicon,
    mode: Mode,
    profile: &PriorProfile,
    min_score: Option<f64>,
) -> Vec<RecommendationCandidate> {
    let candidates = generate_candidates(rename, facts, index, lexicon, mode);
    rank_candidates(candidates, profile, rename.kind, min_score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facts::extract_file;

    #[test]
    fn bundled_profile_values() {
        let p = PriorProfile::bundled();
        p.validate().unwrap();
        assert_eq!(
            p.weight(IdentifierKind::Method, RelationshipKind::CoOccursM),
            0.408
        );
        assert_eq!(
            p.weight(IdentifierKind::Method, RelationshipKind::Assigns),
            0.259
        );
        assert_eq!(
            p.weight(IdentifierKind::Class, RelationshipKind::TypeV),
            0.259
        );
        assert_eq!(
            p.weight(IdentifierKind::Attribute, RelationshipKind::Accesses),
            0.259
        );
        assert_eq!(
            p.weight(IdentifierKind::Parameter, RelationshipKind::Passes),
            0.259
        );
        assert_eq!(
            p.weight(IdentifierKind::Method, RelationshipKind::TypeV),
            0.025
        );
        assert_eq!(p.default_weight, 0.0);
    }

    #[test]
    fn profile_from_rates() {
        let mut rates = BTreeMap::new();
        rates.insert(
            IdentifierKind::Method,
            Measured::Value([(RelationshipKind::Invokes, 1.0)].into_iter().collect()),
        );
        rates.insert(IdentifierKind::Class, Measured::NoData);
        let p = build_prior_profile(&rates, 0.0).unwrap();
        assert_eq!(
            p.weight(IdentifierKind::Method, RelationshipKind::Invokes),
            1.0
        );
        assert!(!p.weights.contains_key(&IdentifierKind::Class));
        let empty: BTreeMap<IdentifierKind, Measured<BTreeMap<RelationshipKind, f64>>> =
            BTreeMap::new();
        assert_eq!(build_prior_profile(&empty, 0.0), Err(ProfileError::NoData));
    }

    #[test]
    fn invalid_profiles() {
        let mut p = PriorProfile::bundled();
        p.default_weight = -1.0;
        assert!(matches!(p.validate(), Err(ProfileError::InvalidDefault(_))));
        let mut p = PriorProfile::bundled();
        p.weights
            .get_mut(&IdentifierKind::Class)
            .unwrap()
            .insert(RelationshipKind::TypeV, f64::NAN);
        assert!(matches!(
            p.validate(),
            Err(ProfileError::InvalidWeight { .. })
        ));
        let mut p = PriorProfile::bundled();
        for w in p
            .weights
            .get_mut(&IdentifierKind::Variable)
            .unwrap()
            .values_mut()
        {
            *w = 0.0;
        }
        assert_eq!(
            p.validate(),
            Err(ProfileError::NoPositiveWeight(IdentifierKind::Variable))
        );
    }

    #[test]
    fn co_occurring_method_first() {
        let facts = extract_file(
            "Bag.java",
            "class Bag { int itemCount; void addItem(Object o) {} void removeItem(Object o) {} }",
        )
        .unwrap();
        let index = RelationIndex::build(&facts);
        let lex = Lexicon::bundled();
        let mut trigger = RenameRecord::new(
            "",
            IdentifierKind::Method,
            "addItem",
            "addElement",
            "Bag.java",
        );
        trigger.compute_chunks(&lex, Mode::Lemma).unwrap();
        let ranked = recommend(
            &trigger,
            &facts,
            &index,
            &lex,
            Mode::Lemma,
            &PriorProfile::bundled(),
            None,
        );
        let names: Vec<(&str, &str)> = ranked
            .iter()
            .map(|c| (c.target.name.as_str(), c.proposed_name.as_str()))
            .collect();
        assert_eq!(
            names,
            [
                ("removeItem", "removeElement"),
                ("itemCount", "elementCount")
            ]
        );
        assert!(ranked[0]
            .relationships
            .contains(RelationshipKind::CoOccursM));
        assert_eq!(ranked[1].score, 0.0);
        let cut = recommend(
            &trigger,
            &facts,
            &index,
            &lex,
            Mode::Lemma,
            &PriorProfile::bundled(),
            Some(0.01),
        );
        assert_eq!(cut.len(), 1);
    }
}
