//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use corename_core::analytics::{
    analyze_repo, AnalysisOptions, CommitFacts, Measured, RelationshipCounts, Report,
};
use corename_core::facts::{extract_file, CodeFacts, SourceFile};
use corename_core::grouping::build_rename_sets;
use corename_core::lexicon::{Lexicon, Mode};
use corename_core::mining::{compute_all_chunks, detect_renames, IdentifierKind, RenameRecord};
use corename_core::recommend::{
    build_prior_profile, recommend, PriorProfile, RecommendationCandidate,
};
use corename_core::RelationIndex;
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::factsio::{
    extract_parallel, facts_from_src, read_facts, read_facts_dir, read_sources, warn_skipped,
};
use crate::history::{CommitChange, Repo};
use crate::output::{pretty_json, write_atomic};
use crate::records::{
    convert_refactoring_miner, load_rename_records, load_sets, serialize_records, serialize_sets,
};
use crate::report::emit_report;
use crate::{
    AnalyzeArgs, CliError, Command, FactsArgs, FactsScope, GroupArgs, MineArgs, OutputFormat,
    RayonRunner, RecommendArgs, RecordsFormat, ReportArgs,
};

const DEFAULT_MODE: Mode = Mode::Lemma;

pub fn dispatch(command: &Command, config: &PipelineConfig) -> Result<(), CliError> {
    match command {
        Command::Mine(a) => mine(a, config),
        Command::Group(a) => group(a, config),
        Command::Facts(a) => facts(a, config),
        Command::Analyze(a) => analyze(a, config),
        Command::Recommend(a) => recommend_cmd(a, config),
        Command::Report(a) => report(a, config),
    }
}

fn data_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| data_err(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|e| CliError::Data(format!("{e:#}")))
}

pub fn lexicon(config: &PipelineConfig) -> Result<Lexicon, CliError> {
    match &config.lemma_table {
        None => Ok(Lexicon::bundled()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| data_err(path, e))?;
            Lexicon::with_overrides(&text).map_err(|e| data_err(path, e))
        }
    }
}

pub fn read_records(path: &Path) -> Result<Vec<RenameRecord>, CliError> {
    load_rename_records(open(path)?).map_err(|e| data_err(path, e))
}

// ---- mine ----

fn mine(a: &MineArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let out = config.out()?;
    let records = match (&config.repo, &config.records) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::Usage(
                "give exactly one of --repo and --records".into(),
            ));
        }
        (None, Some(path)) => {
            if a.facts_dir.is_some() {
                return Err(CliError::Usage("--facts-dir needs --repo".into()));
            }
            match a.records_format {
                RecordsFormat::Jsonl => read_records(path)?,
                RecordsFormat::Refactoringminer => {
                    let text = std::fs::read_to_string(path).map_err(|e| data_err(path, e))?;
                    convert_refactoring_miner(&text).map_err(|e| data_err(path, e))?
                }
            }
        }
        (Some(repo), None) => mine_repo(repo, a)?,
    };
    write(out, &serialize_records(&records)?)
}

fn parse_side(path: &str, text: &str) -> Option<CodeFacts> {
    match extract_file(path, text) {
        Ok(f) => Some(f),
        Err(s) => {
            warn_skipped(std::slice::from_ref(&s));
            None
        }
    }
}

/// Renames of one commit, in file order.
fn commit_renames(change: &CommitChange) -> Vec<RenameRecord> {
    let per_file: Vec<Vec<RenameRecord>> = change
        .files
        .par_iter()
        .map(|pair| {
            let (Some(bp), Some(ap), Some(before), Some(after)) = (
                &pair.before_path,
                &pair.after_path,
                &pair.before,
                &pair.after,
            ) else {
                return Vec::new();
            };
            let (Some(b), Some(a)) = (parse_side(bp, before), parse_side(ap, after)) else {
                return Vec::new();
            };
            let mut found = detect_renames(&b, &a);
            for r in &mut found {
                r.commit = change.commit.clone();
                r.file = ap.clone();
            }
            found
        })
        .collect();
    per_file.into_iter().flatten().collect()
}

fn parent_facts(
    repo: &Repo,
    change: &CommitChange,
    scope: FactsScope,
) -> Result<CodeFacts, CliError> {
    let Some(parent) = &change.parent else {
        return Ok(CodeFacts::default());
    };
    let paths: Vec<String> = match scope {
        FactsScope::Snapshot => repo
            .source_files(parent)
            .map_err(|e| CliError::Data(e.to_string()))?,
        FactsScope::Touched => change
            .files
            .iter()
            .filter_map(|f| f.before_path.clone())
            .filter(|p| p.ends_with(".java"))
            .collect(),
    };
    let sources: Result<Vec<SourceFile>, CliError> = paths
        .into_iter()
        .map(|path| {
            let text = repo
                .show(parent, &path)
                .map_err(|e| CliError::Data(e.to_string()))?;
            Ok(SourceFile { path, text })
        })
        .collect();
    let (facts, skipped) = extract_parallel(&sources?);
    warn_skipped(&skipped);
    Ok(facts)
}

fn mine_repo(root: &Path, a: &MineArgs) -> Result<Vec<RenameRecord>, CliError> {
    let repo = Repo::open(root).map_err(|e| CliError::Data(e.to_string()))?;
    let commits = repo
        .commits(a.range.as_deref())
        .map_err(|e| CliError::Data(e.to_string()))?;
    let mut records = Vec::new();
    for commit in commits {
        let change = repo
            .change(&commit)
            .map_err(|e| CliError::Data(e.to_string()))?;
        let found = commit_renames(&change);
        if let (Some(dir), false) = (&a.facts_dir, found.is_empty()) {
            let facts = parent_facts(&repo, &change, a.facts_scope)?;
            write(&dir.join(format!("{commit}.json")), &pretty_json(&facts)?)?;
        }
        records.extend(found);
    }
    Ok(records)
}

// ---- group ----

fn group(_a: &GroupArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let path = config
        .records
        .as_deref()
        .ok_or_else(|| CliError::Usage("missing --renames".into()))?;
    let out = config.out()?;
    let mode = config.mode.unwrap_or(DEFAULT_MODE);
    let lexicon = lexicon(config)?;
    let mut records = read_records(path)?;
    compute_all_chunks(&mut records, &lexicon, mode)
        .map_err(|(i, e)| data_err(path, format!("record {}: {e}", i + 1)))?;
    let sets = build_rename_sets(&records, mode);
    write(out, &serialize_sets(&sets)?)
}

// ---- facts ----

fn facts(a: &FactsArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let out = config.out()?;
    let sources = read_sources(&a.src)?;
    let (facts, skipped) = extract_parallel(&sources);
    warn_skipped(&skipped);
    write(out, &pretty_json(&facts)?)
}

// ---- analyze ----

fn repo_name(path: &Path) -> String {
    path.file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .into_owned()
}

fn analyze(a: &AnalyzeArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let out = config.out()?;
    let mut renames = a.renames.clone();
    if renames.is_empty() {
        renames.extend(config.records.clone());
    }
    if renames.is_empty() {
        return Err(CliError::Usage("missing --renames".into()));
    }
    if a.sets.is_some() && renames.len() != 1 {
        return Err(CliError::Usage(
            "--sets needs exactly one --renames file".into(),
        ));
    }
    let mut names = std::collections::BTreeSet::new();
    for path in &renames {
        if !names.insert(repo_name(path)) {
            return Err(CliError::Usage(format!(
                "two --renames files are named `{}`",
                repo_name(path)
            )));
        }
    }
    let mode = config.mode.unwrap_or(DEFAULT_MODE);
    let filters = config
        .filters
        .clone()
        .unwrap_or_else(|| IdentifierKind::ALL.to_vec());
    let lexicon = lexicon(config)?;

    let by_commit = match &a.facts_dir {
        Some(dir) => read_facts_dir(dir)?,
        None => BTreeMap::new(),
    };
    let fallback = match (&a.facts, &a.src) {
        (Some(path), _) => Some(RelationIndex::build(&read_facts(path)?)),
        (None, Some(src)) => Some(RelationIndex::build(&facts_from_src(src)?)),
        (None, None) => None,
    };
    if by_commit.is_empty() && fallback.is_none() {
        eprintln!("warning: no code facts given; relationship statistics will have no data");
    }
    let provider = CommitFacts {
        by_commit: &by_commit,
        fallback: fallback.as_ref(),
    };

    let mut stats = Vec::new();
    for path in &renames {
        let records = read_records(path)?;
        let sets = match &a.sets {
            Some(sets_path) => {
                let mut chunked = records.clone();
                compute_all_chunks(&mut chunked, &lexicon, mode)
                    .map_err(|(i, e)| data_err(path, format!("record {}: {e}", i + 1)))?;
                Some(
                    load_sets(open(sets_path)?, mode, &chunked)
                        .map_err(|e| data_err(sets_path, e))?,
                )
            }
            None => None,
        };
        let options = AnalysisOptions {
            mode,
            filters: filters.clone(),
            sets: sets.as_ref(),
        };
        let repo = analyze_repo(
            &repo_name(path),
            &records,
            &lexicon,
            &provider,
            &options,
            &RayonRunner,
        )
        .map_err(|(i, e)| data_err(path, format!("record {}: {e}", i + 1)))?;
        stats.push(repo);
    }
    let report = Report::new(stats);
    emit_report(&report, out, config.plots.unwrap_or(false))?;

    match pooled_profile(&report, &filters) {
        Some(profile) => write(&out.join("profile.json"), &pretty_json(&profile)?)?,
        None => eprintln!("warning: no filtered relationship data; profile.json not written"),
    }
    Ok(())
}

/// Prior profile from the filtered relationship counts of all repositories
/// pooled together.
fn pooled_profile(report: &Report, filters: &[IdentifierKind]) -> Option<PriorProfile> {
    let rates: BTreeMap<IdentifierKind, Measured<_>> = filters
        .iter()
        .map(|&kind| {
            let mut pooled = RelationshipCounts::default();
            for r in &report.repos {
                if let Some(s) = r.filtered.get(&kind) {
                    pooled.merge(&s.counts);
                }
            }
            (kind, pooled.rates())
        })
        .collect();
    build_prior_profile(&rates, 0.0).ok()
}

// ---- recommend ----

fn load_profile(path: &Path) -> Result<PriorProfile, CliError> {
    let profile: PriorProfile =
        serde_json::from_reader(open(path)?).map_err(|e| data_err(path, e))?;
    profile.validate().map_err(|e| data_err(path, e))?;
    Ok(profile)
}

fn format_text(ranked: &[RecommendationCandidate]) -> String {
    let mut s = String::new();
    for c in ranked {
        let rels: Vec<&str> = c.relationships.iter().map(|k| k.name()).collect();
        let rels = if rels.is_empty() {
            "-".to_string()
        } else {
            rels.join(",")
        };
        s.push_str(&format!(
            "{:.3}\t{}\t{} -> {}\t{}:{}\t{}\n",
            c.score,
            c.target.kind,
            c.target.name,
            c.proposed_name,
            c.target.file,
            c.target.line,
            rels
        ));
    }
    s
}

fn recommend_cmd(a: &RecommendArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let facts = match (&a.src, &a.facts) {
        (Some(src), None) => facts_from_src(src)?,
        (None, Some(path)) => read_facts(path)?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --src and --facts".into(),
            ))
        }
    };
    if a.old == a.new {
        return Err(CliError::Usage("--old and --new are the same name".into()));
    }
    if let Some(min) = a.min_score {
        if !min.is_finite() {
            return Err(CliError::Usage(
                "--min-score must be a finite number".into(),
            ));
        }
    }
    let mode = config.mode.unwrap_or(DEFAULT_MODE);
    let lexicon = lexicon(config)?;
    let profile = match &config.profile {
        Some(path) => load_profile(path)?,
        None => PriorProfile::bundled(),
    };
    let mut trigger = RenameRecord::new("", a.kind, &a.old, &a.new, "");
    trigger
        .compute_chunks(&lexicon, mode)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let index = RelationIndex::build(&facts);
    let ranked = recommend(
        &trigger,
        &facts,
        &index,
        &lexicon,
        mode,
        &profile,
        a.min_score,
    );
    let bytes = match a.format {
        OutputFormat::Json => pretty_json(&ranked)?,
        OutputFormat::Text => format_text(&ranked).into_bytes(),
    };
    std::io::stdout()
        .lock()
        .write_all(&bytes)
        .map_err(|e| CliError::Data(format!("cannot write output: {e}")))
}

// ---- report ----

fn report(a: &ReportArgs, config: &PipelineConfig) -> Result<(), CliError> {
    let out = config.out()?;
    let report: Report =
        serde_json::from_reader(open(&a.stats)?).map_err(|e| data_err(&a.stats, e))?;
    emit_report(&report, out, config.plots.unwrap_or(false))?;
    Ok(())
}
