//! Distribution of per-repository values across repositories.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Measured, RepoStats};

/// Five-number summary plus mean over the repositories that had data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub repos: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Distribution {
    /// `None` for an empty sample. Quartiles interpolate linearly between
    /// order statistics.
    pub fn of(values: &[f64]) -> Option<Distribution> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let quantile = |q: f64| {
            let pos = q * (sorted.len() - 1) as f64;
            let lo = pos as usize;
            let frac = pos - lo as f64;
            match sorted.get(lo + 1) {
                Some(&hi) if frac > 0.0 => sorted[lo] + (hi - sorted[lo]) * frac,
                _ => sorted[lo],
            }
        };
        Some(Distribution {
            repos: values.len(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: sorted[0],
            q1: quantile(0.25),
            median: quantile(0.5),
            q3: quantile(0.75),
            max: sorted[sorted.len() - 1],
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub repos: usize,
    /// Metric name to its distribution; metrics without any data are absent.
    pub metrics: BTreeMap<String, Distribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub repos: Vec<RepoStats>,
    pub summary: Summary,
}

impl Report {
    pub fn new(repos: Vec<RepoStats>) -> Report {
        let summary = summarize(&repos);
        Report { repos, summary }
    }
}

/// Per-repository metric values, keyed by metric name.
fn metric_values(stats: &RepoStats) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    let mut push = |name: String, m: &Measured<f64>| {
        if let Measured::Value(v) = m {
            out.push((name, *v));
        }
    };
    push(
        format!("co_rename_rate.{}", stats.mode),
        &stats.co_rename_rate,
    );
    push(
        String::from("co_rename_rate.raw_mode"),
        &stats.inflection.raw.co_rename_rate,
    );
    push(
        String::from("co_rename_rate.lemma_mode"),
        &stats.inflection.lemma.co_rename_rate,
    );
    let mut rates = |prefix: String, m: &Measured<BTreeMap<_, f64>>| {
        if let Measured::Value(map) = m {
            for (k, v) in map {
                out.push((format!("{prefix}.{k:?}"), *v));
            }
        }
    };
    rates(String::from("relationship"), &stats.relationships.rates);
    for (kind, rel) in &stats.filtered {
        rates(format!("filtered.{kind}"), &rel.rates);
    }
    for (mode, chunks) in &stats.chunk_types {
        if let Measured::Value(map) = &chunks.rates {
            for (k, v) in map {
                out.push((format!("chunk.{mode}.{k:?}"), *v));
            }
        }
    }
    out
}

pub fn summarize(repos: &[RepoStats]) -> Summary {
    let mut samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for stats in repos {
        for (name, v) in metric_values(stats) {
            samples.entry(name).or_default().push(v);
        }
    }
    Summary {
        repos: repos.len(),
        metrics: samples
            .into_iter()
            .filter_map(|(k, v)| Distribution::of(&v).map(|d| (k, d)))
            .collect(),
    }
}
