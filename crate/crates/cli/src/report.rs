//! Report files: JSON, CSV tables and optional SVG plots.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use corename_core::analytics::{Distribution, Measured, RelationshipStats, Report};
use corename_core::chunks::ChunkKind;
use corename_core::facts::RelationshipKind;

use crate::output::{pretty_json, write_atomic};

const NA: &str = "NA";

fn num(v: f64) -> String {
    format!("{v}")
}

fn measured(m: &Measured<f64>) -> String {
    m.value().map_or_else(|| NA.to_string(), |v| num(*v))
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn repos_csv(report: &Report) -> Result<Vec<u8>> {
    let rows = report
        .repos
        .iter()
        .map(|r| {
            vec![
                r.repo.clone(),
                r.mode.to_string(),
                r.records.to_string(),
                r.sets.to_string(),
                r.members.to_string(),
                measured(&r.co_rename_rate),
                r.inflection.raw.sets.to_string(),
                r.inflection.lemma.sets.to_string(),
                measured(&r.inflection.raw.co_rename_rate),
                measured(&r.inflection.lemma.co_rename_rate),
                r.inflection.new_sets.to_string(),
                r.inflection.new_co_rename_sets.to_string(),
            ]
        })
        .collect();
    csv_bytes(
        &[
            "repo",
            "mode",
            "records",
            "sets",
            "members",
            "co_rename_rate",
            "raw_sets",
            "lemma_sets",
            "raw_co_rename_rate",
            "lemma_co_rename_rate",
            "new_sets",
            "new_co_rename_sets",
        ],
        rows,
    )
}

pub fn histogram_csv(report: &Report) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for r in &report.repos {
        for cell in r.size_histogram.value().into_iter().flatten() {
            rows.push(vec![
                r.repo.clone(),
                cell.n.to_string(),
                cell.m.to_string(),
                cell.sets.to_string(),
                cell.members.to_string(),
                num(cell.cumulative),
            ]);
        }
    }
    csv_bytes(&["repo", "n", "m", "sets", "members", "cumulative"], rows)
}

fn relationship_rows(
    repo: &str,
    scope: &str,
    stats: &RelationshipStats,
    rows: &mut Vec<Vec<String>>,
) {
    for kind in RelationshipKind::ALL {
        let count = stats.counts.counts.get(&kind).copied().unwrap_or(0);
        let rate = match stats.rates.value() {
            Some(map) => num(map.get(&kind).copied().unwrap_or(0.0)),
            None => NA.to_string(),
        };
        rows.push(vec![
            repo.to_string(),
            scope.to_string(),
            kind.to_string(),
            format!("{:?}", kind.category()),
            count.to_string(),
            rate,
        ]);
    }
}

/// Scopes: `all`, one row block per filter kind, and `new_sets` for the
/// sets only lemma mode creates.
pub fn relationships_csv(report: &Report) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for r in &report.repos {
        relationship_rows(&r.repo, "all", &r.relationships, &mut rows);
        for (kind, stats) in &r.filtered {
            relationship_rows(&r.repo, kind.name(), stats, &mut rows);
        }
        relationship_rows(
            &r.repo,
            "new_sets",
            &r.inflection.new_set_relationships,
            &mut rows,
        );
    }
    csv_bytes(
        &["repo", "scope", "relationship", "category", "count", "rate"],
        rows,
    )
}

pub fn chunks_csv(report: &Report) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for r in &report.repos {
        for (mode, stats) in &r.chunk_types {
            for kind in ChunkKind::ALL {
                let rate = match stats.rates.value() {
                    Some(map) => num(map.get(&kind).copied().unwrap_or(0.0)),
                    None => NA.to_string(),
                };
                let count = stats.counts.get(&kind).copied().unwrap_or(0);
                rows.push(vec![
                    r.repo.clone(),
                    mode.to_string(),
                    kind.name().to_string(),
                    count.to_string(),
                    rate,
                ]);
            }
        }
    }
    csv_bytes(&["repo", "mode", "chunk", "count", "rate"], rows)
}

pub fn summary_csv(report: &Report) -> Result<Vec<u8>> {
    let rows = report
        .summary
        .metrics
        .iter()
        .map(|(name, d)| {
            vec![
                name.clone(),
                d.repos.to_string(),
                num(d.mean),
                num(d.min),
                num(d.q1),
                num(d.median),
                num(d.q3),
                num(d.max),
            ]
        })
        .collect();
    csv_bytes(
        &[
            "metric", "repos", "mean", "min", "q1", "median", "q3", "max",
        ],
        rows,
    )
}

// ---- SVG ----

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 96.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn frame(title: &str, body: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let plot_h = HEIGHT - TOP - BOTTOM;
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let y = TOP + plot_h * (1.0 - v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"##,
            WIDTH - RIGHT,
            LEFT - 4.0,
            y + 4.0
        );
    }
    s.push_str(body);
    s.push_str("</svg>\n");
    s
}

fn y_of(v: f64) -> f64 {
    TOP + (HEIGHT - TOP - BOTTOM) * (1.0 - v.clamp(0.0, 1.0))
}

/// Box plots of values in [0, 1], one box per label.
pub fn boxplot_svg(title: &str, boxes: &[(String, &Distribution)]) -> String {
    let mut body = String::new();
    let slot = (WIDTH - LEFT - RIGHT) / boxes.len().max(1) as f64;
    for (i, (label, d)) in boxes.iter().enumerate() {
        let cx = LEFT + slot * (i as f64 + 0.5);
        let half = (slot * 0.3).min(24.0);
        let _ = writeln!(
            body,
            r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="black"/>"#,
            y_of(d.max),
            y_of(d.min)
        );
        let _ = writeln!(
            body,
            r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="#9ecae1" stroke="black"/>"##,
            cx - half,
            y_of(d.q3),
            half * 2.0,
            (y_of(d.q1) - y_of(d.q3)).max(0.5)
        );
        let _ = writeln!(
            body,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#,
            cx - half,
            y_of(d.median),
            cx + half,
            y_of(d.median)
        );
        let ly = HEIGHT - BOTTOM + 12.0;
        let _ = writeln!(
            body,
            r#"<text x="{cx:.1}" y="{ly:.1}" text-anchor="end" transform="rotate(-45 {cx:.1} {ly:.1})">{}</text>"#,
            escape(label)
        );
    }
    frame(title, &body)
}

/// Cumulative share of co-rename members by set size, one line per
/// repository.
pub fn cumulative_svg(report: &Report) -> String {
    let series: Vec<Vec<(usize, f64)>> = report
        .repos
        .iter()
        .map(|r| {
            let mut pts: Vec<(usize, f64)> = r
                .size_histogram
                .value()
                .into_iter()
                .flatten()
                .map(|c| (c.n, c.cumulative))
                .collect();
            pts.dedup_by_key(|p| p.0);
            pts
        })
        .collect();
    let max_n = series
        .iter()
        .flatten()
        .map(|p| p.0)
        .max()
        .unwrap_or(2)
        .max(3);
    let x_of = |n: usize| LEFT + (WIDTH - LEFT - RIGHT) * (n - 2) as f64 / (max_n - 2) as f64;
    let mut body = String::new();
    for pts in series.iter().filter(|p| !p.is_empty()) {
        let mut d = String::new();
        let mut prev = 0.0;
        for (i, &(n, c)) in pts.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(
                d,
                "{cmd}{:.1},{:.1} L{:.1},{:.1} ",
                x_of(n),
                y_of(prev),
                x_of(n),
                y_of(c)
            );
            prev = c;
        }
        let _ = writeln!(
            body,
            r##"<path d="{}" fill="none" stroke="#3182bd" stroke-opacity="0.6"/>"##,
            d.trim_end()
        );
    }
    for n in 2..=max_n {
        if max_n <= 20 || n % ((max_n / 10).max(1)) == 0 {
            let _ = writeln!(
                body,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{n}</text>"#,
                x_of(n),
                HEIGHT - BOTTOM + 14.0
            );
        }
    }
    let _ = writeln!(
        body,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">set size</text>"#,
        WIDTH / 2.0,
        HEIGHT - BOTTOM + 32.0
    );
    frame("Cumulative share of co-rename members by set size", &body)
}

fn boxes_with_prefix<'a>(report: &'a Report, prefix: &str) -> Vec<(String, &'a Distribution)> {
    report
        .summary
        .metrics
        .iter()
        .filter_map(|(k, d)| k.strip_prefix(prefix).map(|label| (label.to_string(), d)))
        .filter(|(label, _)| !label.contains('.'))
        .collect()
}

pub fn plots(report: &Report) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    let rates: Vec<(String, &Distribution)> = ["raw_mode", "lemma_mode"]
        .iter()
        .filter_map(|m| {
            report
                .summary
                .metrics
                .get(&format!("co_rename_rate.{m}"))
                .map(|d| (m.to_string(), d))
        })
        .collect();
    out.push((
        "co_rename_rate.svg",
        boxplot_svg("Co-rename rate per repository", &rates),
    ));
    out.push((
        "relationships.svg",
        boxplot_svg(
            "Relationship rates per repository",
            &boxes_with_prefix(report, "relationship."),
        ),
    ));
    out.push((
        "chunks.svg",
        boxplot_svg(
            "Chunk type rates per repository (lemma mode)",
            &boxes_with_prefix(report, "chunk.lemma."),
        ),
    ));
    out.push(("size_distribution.svg", cumulative_svg(report)));
    out
}

/// Writes every report file into `dir`; SVG files only with `with_plots`.
pub fn emit_report(report: &Report, dir: &Path, with_plots: bool) -> Result<Vec<String>> {
    let mut files: Vec<(String, Vec<u8>)> = vec![
        ("report.json".into(), pretty_json(report)?),
        ("repos.csv".into(), repos_csv(report)?),
        ("histogram.csv".into(), histogram_csv(report)?),
        ("relationships.csv".into(), relationships_csv(report)?),
        ("chunks.csv".into(), chunks_csv(report)?),
        ("summary.csv".into(), summary_csv(report)?),
    ];
    if with_plots {
        files.extend(
            plots(report)
                .into_iter()
                .map(|(name, svg)| (name.to_string(), svg.into_bytes())),
        );
    }
    for (name, bytes) in &files {
        write_atomic(&dir.join(name), bytes)?;
    }
    Ok(files.into_iter().map(|(n, _)| n).collect())
}
