//! Rename-record files: the JSONL exchange format, rename-set files, and
//! conversion from RefactoringMiner's JSON output.

use std::io::BufRead;

use corename_core::chunks::ChunkKey;
use corename_core::grouping::{MeaningfulRenameSet, RenameSetCollection};
use corename_core::lexicon::Mode;
use corename_core::mining::{IdentifierKind, RenameRecord};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {kind}")]
    UnknownKind {
        line: usize,
        kind: corename_core::mining::UnknownKind,
    },
    #[error("cannot read records: {0}")]
    Io(String),
}

#[derive(Deserialize)]
struct RawRecord {
    commit: String,
    kind: String,
    old: String,
    new: String,
    file: String,
    #[serde(default)]
    container: Option<String>,
}

/// Reads one record per non-blank line, in input order. Chunks are left
/// empty.
pub fn load_rename_records(reader: impl BufRead) -> Result<Vec<RenameRecord>, RecordError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| RecordError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| RecordError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let kind: IdentifierKind = raw.kind.parse().map_err(|kind| RecordError::UnknownKind {
            line: line_no,
            kind,
        })?;
        if raw.old == raw.new {
            return Err(RecordError::Parse {
                line: line_no,
                message: format!("old and new name are both `{}`", raw.old),
            });
        }
        let mut record = RenameRecord::new(&raw.commit, kind, &raw.old, &raw.new, &raw.file);
        record.container = raw.container;
        out.push(record);
    }
    Ok(out)
}

pub fn serialize_records(records: &[RenameRecord]) -> anyhow::Result<Vec<u8>> {
    crate::output::jsonl(records)
}

#[derive(Serialize, Deserialize)]
struct SetLine {
    commit: String,
    key: String,
    members: Vec<usize>,
}

pub fn serialize_sets(coll: &RenameSetCollection) -> anyhow::Result<Vec<u8>> {
    crate::output::jsonl(coll.sets.iter().map(|s| SetLine {
        commit: s.commit.clone(),
        key: s.key.as_str().to_string(),
        members: s.members.clone(),
    }))
}

/// Reads a rename-set file written by `group`. `records` must carry chunks
/// computed in `mode`; every member has to be a record of the set's commit
/// with the set's chunk.
pub fn load_sets(
    reader: impl BufRead,
    mode: Mode,
    records: &[RenameRecord],
) -> Result<RenameSetCollection, RecordError> {
    let record_count = records.len();
    let mut sets = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| RecordError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| RecordError::Parse {
            line: line_no,
            message,
        };
        let raw: SetLine = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        let key = ChunkKey::parse(&raw.key)
            .ok_or_else(|| parse_err(format!("malformed chunk key `{}`", raw.key)))?;
        if raw.members.is_empty() {
            return Err(parse_err("a rename set needs at least one member".into()));
        }
        if let Some(bad) = raw.members.iter().find(|&&m| m >= record_count) {
            return Err(parse_err(format!(
                "member {bad} is out of range ({record_count} records)"
            )));
        }
        if raw.members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err("members must be strictly increasing".into()));
        }
        for &m in &raw.members {
            let r = &records[m];
            if r.commit != raw.commit || !r.chunks.iter().any(|c| c.key() == key) {
                return Err(parse_err(format!(
                    "record {m} has no chunk {key} in commit {} ({mode} mode)",
                    raw.commit
                )));
            }
        }
        sets.push(MeaningfulRenameSet {
            commit: raw.commit,
            key,
            members: raw.members,
        });
    }
    Ok(RenameSetCollection { mode, sets })
}

// ---- RefactoringMiner ----

#[derive(Deserialize)]
struct MinerOutput {
    commits: Vec<MinerCommit>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct MinerCommit {
    sha1: String,
    #[serde(default)]
    refactorings: Vec<MinerRefactoring>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct MinerRefactoring {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    left_side_locations: Vec<MinerLocation>,
    #[serde(default)]
    right_side_locations: Vec<MinerLocation>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct MinerLocation {
    file_path: String,
    code_element_type: String,
    #[serde(default)]
    code_element: Option<String>,
}

/// Declared name inside a RefactoringMiner code element string.
fn element_name(kind: IdentifierKind, element: &str) -> Option<String> {
    let name = match kind {
        IdentifierKind::Class => element.rsplit('.').next()?,
        IdentifierKind::Method => element.split('(').next()?.split_whitespace().last()?,
        _ => element.split(" : ").next()?.split_whitespace().last()?,
    };
    (!name.is_empty()).then(|| name.to_string())
}

fn declaration_location(
    kind: IdentifierKind,
    locations: &[MinerLocation],
) -> Option<&MinerLocation> {
    let wanted = match kind {
        IdentifierKind::Class => "TYPE_DECLARATION",
        IdentifierKind::Method => "METHOD_DECLARATION",
        IdentifierKind::Attribute => "FIELD_DECLARATION",
        IdentifierKind::Parameter => "SINGLE_VARIABLE_DECLARATION",
        IdentifierKind::Variable => "VARIABLE_DECLARATION",
    };
    locations
        .iter()
        .find(|l| l.code_element_type.starts_with(wanted) && l.code_element.is_some())
        .or_else(|| locations.iter().find(|l| l.code_element.is_some()))
}

/// Converts RefactoringMiner's JSON output into rename records. Only the
/// five rename refactoring types are kept; others are ignored.
pub fn convert_refactoring_miner(json: &str) -> Result<Vec<RenameRecord>, RecordError> {
    let parsed: MinerOutput = serde_json::from_str(json).map_err(|e| RecordError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut out = Vec::new();
    for commit in parsed.commits {
        for r in commit.refactorings {
            let kind = match r.kind.as_str() {
                "Rename Class" => IdentifierKind::Class,
                "Rename Method" => IdentifierKind::Method,
                "Rename Attribute" => IdentifierKind::Attribute,
                "Rename Parameter" => IdentifierKind::Parameter,
                "Rename Variable" => IdentifierKind::Variable,
                _ => continue,
            };
            let (Some(left), Some(right)) = (
                declaration_location(kind, &r.left_side_locations),
                declaration_location(kind, &r.right_side_locations),
            ) else {
                continue;
            };
            let old = left
                .code_element
                .as_deref()
                .and_then(|e| element_name(kind, e));
            let new = right
                .code_element
                .as_deref()
                .and_then(|e| element_name(kind, e));
            if let (Some(old), Some(new)) = (old, new) {
                if old != new {
                    out.push(RenameRecord::new(
                        &commit.sha1,
                        kind,
                        &old,
                        &new,
                        &right.file_path,
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_records_in_order() {
        let text = r#"{"commit":"3ccd7a1","kind":"Class","old":"MetricType","new":"MetricAttribute","file":"a/MetricType.java"}

{"commit":"3ccd7a1","kind":"Parameter","old":"metricType","new":"metricAttribute","file":"a/G.java","container":"G.send"}
"#;
        let records = load_rename_records(text.as_bytes()).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].kind, IdentifierKind::Class);
        assert_eq!(records[1].container.as_deref(), Some("G.send"));
        assert!(records.iter().all(|r| r.chunks.is_empty()));
        assert!(load_rename_records("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_kind =
            "{\"commit\":\"c\",\"kind\":\"Enum\",\"old\":\"a\",\"new\":\"b\",\"file\":\"f\"}\n";
        let text = bad_kind.to_string();
        assert!(matches!(
            load_rename_records(text.as_bytes()),
            Err(RecordError::UnknownKind { line: 1, .. })
        ));
        let text = "\n{\"commit\":\"c\",\"kind\":\"Class\",\"old\":\"a\",\"new\":\"b\",\"file\":\"f\"}\n{oops\n".to_string();
        assert!(matches!(
            load_rename_records(text.as_bytes()),
            Err(RecordError::Parse { line: 3, .. })
        ));
        let same =
            "{\"commit\":\"c\",\"kind\":\"Class\",\"old\":\"a\",\"new\":\"a\",\"file\":\"f\"}";
        assert!(matches!(
            load_rename_records(same.as_bytes()),
            Err(RecordError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn records_round_trip() {
        let mut r = RenameRecord::new("c", IdentifierKind::Method, "getA", "fetchA", "F.java");
        r.container = Some("F".into());
        let records = vec![
            r,
            RenameRecord::new("d", IdentifierKind::Variable, "x", "y", "G.java"),
        ];
        let bytes = serialize_records(&records).unwrap();
        assert_eq!(load_rename_records(bytes.as_slice()).unwrap(), records);
    }

    #[test]
    fn sets_round_trip_and_validate() {
        let key = ChunkKey::parse("R|get|fetch").unwrap();
        let coll = RenameSetCollection {
            mode: Mode::Raw,
            sets: vec![MeaningfulRenameSet {
                commit: "c".into(),
                key,
                members: vec![0, 2],
            }],
        };
        let bytes = serialize_sets(&coll).unwrap();
        let lex = corename_core::lexicon::Lexicon::bundled();
        let mut records: Vec<RenameRecord> = [
            ("c", "getA", "fetchA"),
            ("c", "x", "y"),
            ("c", "getB", "fetchB"),
        ]
        .iter()
        .map(|(c, o, n)| RenameRecord::new(c, IdentifierKind::Method, o, n, "F.java"))
        .collect();
        corename_core::mining::compute_all_chunks(&mut records, &lex, Mode::Raw).unwrap();
        assert_eq!(
            load_sets(bytes.as_slice(), Mode::Raw, &records).unwrap(),
            coll
        );
        assert!(matches!(
            load_sets(bytes.as_slice(), Mode::Raw, &records[..2]),
            Err(RecordError::Parse { line: 1, .. })
        ));
        let bad = r#"{"commit":"c","key":"Z|a|b","members":[0]}"#;
        assert!(load_sets(bad.as_bytes(), Mode::Raw, &records).is_err());
        let not_member = r#"{"commit":"c","key":"R|get|fetch","members":[0,1]}"#;
        assert!(load_sets(not_member.as_bytes(), Mode::Raw, &records).is_err());
        let other_commit = r#"{"commit":"d","key":"R|get|fetch","members":[0]}"#;
        assert!(load_sets(other_commit.as_bytes(), Mode::Raw, &records).is_err());
    }

    #[test]
    fn refactoring_miner_conversion() {
        let json = r#"{"commits":[{"repository":"r","sha1":"abc","url":"u","refactorings":[
          {"type":"Rename Class","description":"Rename Class a.MetricType renamed to a.MetricAttribute",
           "leftSideLocations":[{"filePath":"a/MetricType.java","startLine":1,"endLine":9,"codeElementType":"TYPE_DECLARATION","codeElement":"a.MetricType"}],
           "rightSideLocations":[{"filePath":"a/MetricAttribute.java","startLine":1,"endLine":9,"codeElementType":"TYPE_DECLARATION","codeElement":"a.MetricAttribute"}]},
          {"type":"Rename Method","description":"",
           "leftSideLocations":[{"filePath":"a/R.java","codeElementType":"METHOD_DECLARATION","codeElement":"public getDisabledMetricTypes() : Set<MetricType>"}],
           "rightSideLocations":[{"filePath":"a/R.java","codeElementType":"METHOD_DECLARATION","codeElement":"public getDisabledMetricAttributes() : Set<MetricAttribute>"}]},
          {"type":"Rename Parameter","description":"",
           "leftSideLocations":[{"filePath":"a/R.java","codeElementType":"SINGLE_VARIABLE_DECLARATION","codeElement":"metricType : MetricType"}],
           "rightSideLocations":[{"filePath":"a/R.java","codeElementType":"SINGLE_VARIABLE_DECLARATION","codeElement":"metricAttribute : MetricAttribute"}]},
          {"type":"Extract Method","description":"","leftSideLocations":[],"rightSideLocations":[]}
        ]}]}"#;
        let records = convert_refactoring_miner(json).unwrap();
        let got: Vec<(IdentifierKind, &str, &str)> = records
            .iter()
            .map(|r| (r.kind, r.old_name.as_str(), r.new_name.as_str()))
            .collect();
        assert_eq!(
            got,
            [
                (IdentifierKind::Class, "MetricType", "MetricAttribute"),
                (
                    IdentifierKind::Method,
                    "getDisabledMetricTypes",
                    "getDisabledMetricAttributes"
                ),
                (IdentifierKind::Parameter, "metricType", "metricAttribute"),
            ]
        );
        assert!(records.iter().all(|r| r.commit == "abc"));
    }
}
