//! Command-line pipeline: mine renames, group them into rename sets,
//! extract code facts, analyze, recommend co-renames and render reports.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corename_core::lexicon::Mode;
use corename_core::mining::IdentifierKind;
use rayon::prelude::*;
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod factsio;
pub mod history;
pub mod output;
pub mod records;
pub mod report;

use config::PipelineConfig;
use corename_core::analytics::{RelationshipCounts, SetRunner};

/// Failure of a subcommand, mapped to the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or missing arguments (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed input, or an unwritable output (exit 2).
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(format!("{e:#}"))
    }
}

/// Runs per-set tallies on the current rayon pool, keeping job order.
pub struct RayonRunner;

impl SetRunner for RayonRunner {
    fn run(
        &self,
        jobs: usize,
        task: &(dyn Fn(usize) -> RelationshipCounts + Sync),
    ) -> Vec<RelationshipCounts> {
        (0..jobs).into_par_iter().map(task).collect()
    }
}

fn parse_kind(s: &str) -> Result<IdentifierKind, String> {
    s.parse()
        .map_err(|e: corename_core::mining::UnknownKind| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Debug, Parser)]
#[command(
    name = "corename",
    version,
    about = "Mine, analyze and recommend co-renamed identifiers"
)]
pub struct Cli {
    /// TOML pipeline configuration; its values override the matching flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true, env = "CORENAME_WORKERS", value_name = "N")]
    pub workers: Option<usize>,
    /// Extra lemmatizer exceptions, one `<inflected> <lemma>` pair per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub lemma_table: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Produce rename records from a git history or a detector's output.
    Mine(MineArgs),
    /// Group rename records into meaningful rename sets.
    Group(GroupArgs),
    /// Extract code facts from a source tree.
    Facts(FactsArgs),
    /// Compute per-repository statistics and write a report directory.
    Analyze(AnalyzeArgs),
    /// Rank co-rename candidates for a rename.
    Recommend(RecommendArgs),
    /// Re-render tables and plots from a saved report.json.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecordsFormat {
    Jsonl,
    Refactoringminer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Detector {
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactsScope {
    /// Every source file of the parent commit.
    Snapshot,
    /// Only the files the commit changed, as they were in the parent.
    Touched,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    /// Git repository to walk.
    #[arg(long)]
    pub repo: Option<PathBuf>,
    /// Detector output to convert instead of walking a repository.
    #[arg(long)]
    pub records: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub records_format: RecordsFormat,
    /// Commit range such as `a..b` (default: all of HEAD).
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long, value_enum, default_value = "naive")]
    pub detector: Detector,
    /// Also write parent-commit facts as `<commit>.json` into this directory.
    #[arg(long, value_name = "DIR")]
    pub facts_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "snapshot")]
    pub facts_scope: FactsScope,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub renames: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FactsArgs {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Rename records of one repository; repeat for several repositories.
    #[arg(long)]
    pub renames: Vec<PathBuf>,
    /// Precomputed rename sets for a single `--renames` file.
    #[arg(long)]
    pub sets: Option<PathBuf>,
    /// Directory of per-commit facts named `<commit>.json`.
    #[arg(long, value_name = "DIR")]
    pub facts_dir: Option<PathBuf>,
    /// Facts snapshot used for commits without their own facts file.
    #[arg(long, conflicts_with = "src")]
    pub facts: Option<PathBuf>,
    /// Source tree parsed into the fallback facts snapshot.
    #[arg(long)]
    pub src: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Restrict relationship statistics to sets with a member of this kind.
    #[arg(long = "filter", value_parser = parse_kind)]
    pub filters: Vec<IdentifierKind>,
    /// Also render SVG plots.
    #[arg(long)]
    pub plots: bool,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long, conflicts_with = "facts")]
    pub src: Option<PathBuf>,
    #[arg(long)]
    pub facts: Option<PathBuf>,
    #[arg(long)]
    pub old: String,
    #[arg(long)]
    pub new: String,
    #[arg(long, value_parser = parse_kind)]
    pub kind: IdentifierKind,
    /// Prior profile JSON (default: the bundled profile).
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Drop candidates scoring below this value.
    #[arg(long)]
    pub min_score: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A report.json written by `analyze`.
    #[arg(long)]
    pub stats: PathBuf,
    #[arg(long)]
    pub plots: bool,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl Cli {
    /// Flag values that a configuration file may override.
    fn flag_config(&self) -> PipelineConfig {
        let mut c = PipelineConfig {
            lemma_table: self.lemma_table.clone(),
            workers: self.workers,
            ..Default::default()
        };
        match &self.command {
            Command::Mine(a) => {
                c.repo = a.repo.clone();
                c.records = a.records.clone();
                c.out = a.out.clone();
            }
            Command::Group(a) => {
                c.records = a.renames.clone();
                c.mode = a.mode;
                c.out = a.out.clone();
            }
            Command::Facts(a) => c.out = a.out.clone(),
            Command::Analyze(a) => {
                c.mode = a.mode;
                c.filters = (!a.filters.is_empty()).then(|| a.filters.clone());
                c.plots = Some(a.plots);
                c.out = a.out.clone();
            }
            Command::Recommend(a) => {
                c.mode = a.mode;
                c.profile = a.profile.clone();
            }
            Command::Report(a) => {
                c.plots = Some(a.plots);
                c.out = a.out.clone();
            }
        }
        c
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let flags = cli.flag_config();
    let config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?.over(flags),
        None => flags,
    };
    if config.workers == Some(0) {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Data(format!("cannot start workers: {e}")))?;
    pool.install(|| commands::dispatch(&cli.command, &config))
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
