//! Shared pipeline configuration. Values from a `--config` file take
//! precedence over the matching command-line flags.

use std::path::{Path, PathBuf};

use corename_core::lexicon::Mode;
use corename_core::mining::IdentifierKind;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub repo: Option<PathBuf>,
    pub records: Option<PathBuf>,
    pub mode: Option<Mode>,
    pub filters: Option<Vec<IdentifierKind>>,
    pub out: Option<PathBuf>,
    pub lemma_table: Option<PathBuf>,
    pub plots: Option<bool>,
    pub profile: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
        let config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| CliError::Data(format!("config {}: {e}", path.display())))?;
        if config.workers == Some(0) {
            return Err(CliError::Data(format!(
                "config {}: workers must be at least 1",
                path.display()
            )));
        }
        if let Some(base) = path.parent() {
            return Ok(config.relative_to(base));
        }
        Ok(config)
    }

    /// Resolves relative paths against the directory holding the config file.
    fn relative_to(mut self, base: &Path) -> PipelineConfig {
        for p in [
            &mut self.repo,
            &mut self.records,
            &mut self.out,
            &mut self.lemma_table,
            &mut self.profile,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        self
    }

    /// Fills every unset field from `flags`.
    pub fn over(self, flags: PipelineConfig) -> PipelineConfig {
        PipelineConfig {
            repo: self.repo.or(flags.repo),
            records: self.records.or(flags.records),
            mode: self.mode.or(flags.mode),
            filters: self.filters.or(flags.filters),
            out: self.out.or(flags.out),
            lemma_table: self.lemma_table.or(flags.lemma_table),
            plots: self.plots.or(flags.plots),
            profile: self.profile.or(flags.profile),
            workers: self.workers.or(flags.workers),
        }
    }

    pub fn out(&self) -> Result<&Path, CliError> {
        self.out
            .as_deref()
            .ok_or_else(|| CliError::Usage("missing --out".into()))
    }
}
