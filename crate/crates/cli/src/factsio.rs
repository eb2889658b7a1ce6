//! Reading source trees and facts files.

use std::collections::BTreeMap;
use std::path::Path;

use corename_core::facts::{extract_file, CodeFacts, SkippedFile, SourceFile};
use corename_core::RelationIndex;
use rayon::prelude::*;
use walkdir::WalkDir;

use crate::CliError;

/// Every `.java` file below `root`, with `/`-separated paths relative to
/// `root`, sorted by path.
pub fn read_sources(root: &Path) -> Result<Vec<SourceFile>, CliError> {
    if !root.is_dir() {
        return Err(CliError::Data(format!(
            "source directory {} does not exist",
            root.display()
        )));
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry =
            entry.map_err(|e| CliError::Data(format!("cannot walk {}: {e}", root.display())))?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().is_none_or(|e| e != "java") {
            continue;
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        let rel = path.strip_prefix(root).unwrap_or(path);
        let rel: Vec<String> = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect();
        out.push(SourceFile {
            path: rel.join("/"),
            text,
        });
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

/// Parses files in parallel and merges them in path order, so the result
/// does not depend on the worker count.
pub fn extract_parallel(sources: &[SourceFile]) -> (CodeFacts, Vec<SkippedFile>) {
    let mut ordered: Vec<&SourceFile> = sources.iter().collect();
    ordered.sort_by(|a, b| a.path.cmp(&b.path));
    let results: Vec<Result<CodeFacts, SkippedFile>> = ordered
        .par_iter()
        .map(|f| extract_file(&f.path, &f.text))
        .collect();
    let mut parts = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(f) => parts.push(f),
            Err(s) => skipped.push(s),
        }
    }
    (CodeFacts::merge(parts), skipped)
}

pub fn warn_skipped(skipped: &[SkippedFile]) {
    for s in skipped {
        eprintln!("warning: skipped {s}");
    }
}

pub fn facts_from_src(root: &Path) -> Result<CodeFacts, CliError> {
    let sources = read_sources(root)?;
    let (facts, skipped) = extract_parallel(&sources);
    warn_skipped(&skipped);
    Ok(facts)
}

pub fn read_facts(path: &Path) -> Result<CodeFacts, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let facts: CodeFacts = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: line {}: {e}", path.display(), e.line())))?;
    facts
        .validate()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(facts)
}

/// Relation indexes for every `<commit>.json` in `dir`, keyed by commit.
pub fn read_facts_dir(dir: &Path) -> Result<BTreeMap<String, RelationIndex>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| {
        CliError::Data(format!(
            "cannot read facts directory {}: {e}",
            dir.display()
        ))
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", dir.display())))?
            .path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    let indexes: Result<Vec<(String, RelationIndex)>, CliError> = paths
        .par_iter()
        .map(|p| {
            let commit = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            read_facts(p).map(|f| (commit, RelationIndex::build(&f)))
        })
        .collect();
    Ok(indexes?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walks_java_files_only() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("b/c")).unwrap();
        std::fs::write(dir.path().join("b/c/Z.java"), "class Z { int count; }").unwrap();
        std::fs::write(dir.path().join("A.java"), "class A { Z z; }").unwrap();
        std::fs::write(dir.path().join("notes.txt"), "class Q {}").unwrap();
        std::fs::write(dir.path().join("Broken.java"), "class {").unwrap();
        let sources = read_sources(dir.path()).unwrap();
        let paths: Vec<&str> = sources.iter().map(|s| s.path.as_str()).collect();
        assert_eq!(paths, ["A.java", "Broken.java", "b/c/Z.java"]);
        let (facts, skipped) = extract_parallel(&sources);
        assert_eq!(skipped.len(), 1);
        assert_eq!(facts, corename_core::facts::extract_facts(&sources).0);
    }

    #[test]
    fn missing_source_dir_is_data_error() {
        assert!(matches!(
            read_sources(Path::new("/nonexistent/src")),
            Err(CliError::Data(_))
        ));
    }
}
