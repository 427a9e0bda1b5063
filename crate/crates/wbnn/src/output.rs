//! CSV tables and run manifests.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips through `f64` parsing, so reruns with equal inputs produce
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use wbnn_core::density::RiskTable;
use wbnn_core::learner::SweepRow;
use wbnn_core::{CoefficientTree, LearnReport, SampleGrid};

use crate::error::{AppError, AppResult};

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> AppResult<()> {
    fs::create_dir_all(dir).map_err(|source| AppError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_csv<I>(path: PathBuf, header: &[&str], rows: I) -> AppResult<PathBuf>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| AppError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// `learn.csv`: x, target, learned, abs_error.
pub fn write_learn(dir: &Path, target: &SampleGrid, report: &LearnReport) -> AppResult<PathBuf> {
    let rows = target
        .xs()
        .zip(target.values())
        .zip(report.reconstruction.values())
        .zip(&report.error_profile)
        .map(|(((x, t), l), e)| vec![fmt(x), fmt(*t), fmt(*l), fmt(*e)]);
    write_csv(dir.join("learn.csv"), &["x", "target", "learned", "abs_error"], rows)
}

/// `sweep.csv`: one row per (target, requested percentage).
pub fn write_sweep(dir: &Path, rows: &[(String, SweepRow)]) -> AppResult<PathBuf> {
    let rows = rows.iter().map(|(name, r)| {
        vec![
            name.clone(),
            fmt(r.pct),
            fmt(r.compression_pct),
            fmt(r.mise),
            fmt(r.relative_mise),
        ]
    });
    write_csv(
        dir.join("sweep.csv"),
        &["target", "pct", "compression_pct", "mise", "relative_mise"],
        rows,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub target: String,
    pub benchmark_mise: f64,
    pub compression_pct: f64,
    pub kept_count: usize,
    pub mise: f64,
}

/// `benchmark.csv`: compression at which each target first meets the benchmark MISE.
pub fn write_benchmark(dir: &Path, rows: &[BenchmarkRow]) -> AppResult<PathBuf> {
    let rows = rows.iter().map(|r| {
        vec![
            r.target.clone(),
            fmt(r.benchmark_mise),
            fmt(r.compression_pct),
            r.kept_count.to_string(),
            fmt(r.mise),
        ]
    });
    write_csv(
        dir.join("benchmark.csv"),
        &["target", "benchmark_mise", "compression_pct", "kept_count", "mise"],
        rows,
    )
}

/// `density.csv`: per sample size, with the fitted slope and its interval
/// repeated on every row.
pub fn write_density(
    dir: &Path,
    table: &RiskTable,
    theoretical: f64,
    ci: Option<(f64, f64)>,
) -> AppResult<PathBuf> {
    let (lo, hi) = ci.unwrap_or((f64::NAN, f64::NAN));
    let rows = table.rows.iter().map(|r| {
        vec![
            r.n.to_string(),
            r.level.to_string(),
            fmt(r.mean_mise),
            fmt(r.mean_risk),
            fmt(table.slope()),
            fmt(lo),
            fmt(hi),
            fmt(theoretical),
        ]
    });
    write_csv(
        dir.join("density.csv"),
        &[
            "N",
            "level",
            "mean_mise",
            "mean_risk",
            "fitted_slope",
            "slope_ci_lo",
            "slope_ci_hi",
            "theoretical_slope",
        ],
        rows,
    )
}

/// `swarm.csv` with one learned column per member, and `swarm_summary.csv`
/// with the kept set of each member as `j:k` pairs joined by `;`.
pub fn write_swarm(
    dir: &Path,
    target: &SampleGrid,
    offsets: &[f64],
    reports: &[LearnReport],
) -> AppResult<(PathBuf, PathBuf)> {
    let mut header = vec!["x".to_string(), "target".to_string()];
    header.extend((0..reports.len()).map(|i| format!("member_{i}")));
    let header_ref: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..target.len()).map(|i| {
        let mut row = vec![fmt(target.x(i)), fmt(target.values()[i])];
        row.extend(reports.iter().map(|r| fmt(r.reconstruction.values()[i])));
        row
    });
    let curves = write_csv(dir.join("swarm.csv"), &header_ref, rows)?;
    let summary = reports.iter().zip(offsets).enumerate().map(|(i, (r, off))| {
        let kept: Vec<String> = r.kept_set().iter().map(|(j, k)| format!("{j}:{k}")).collect();
        vec![
            i.to_string(),
            fmt(*off),
            fmt(r.tau),
            r.kept_count.to_string(),
            fmt(r.compression_pct),
            fmt(r.mise),
            kept.join(";"),
        ]
    });
    let summary = write_csv(
        dir.join("swarm_summary.csv"),
        &["member", "s_offset", "tau", "kept_count", "compression_pct", "mise", "kept_set"],
        summary,
    )?;
    Ok((curves, summary))
}

/// `transform.csv`: kind (`alpha` or `beta`), j, k, coefficient.
pub fn write_transform(dir: &Path, tree: &CoefficientTree) -> AppResult<PathBuf> {
    let j0 = tree.j0();
    let alphas = tree
        .alphas()
        .iter()
        .enumerate()
        .map(move |(k, a)| vec!["alpha".into(), j0.to_string(), k.to_string(), fmt(*a)]);
    let betas = tree
        .betas()
        .map(|(j, k, b)| vec!["beta".into(), j.to_string(), k.to_string(), fmt(b)]);
    write_csv(
        dir.join("transform.csv"),
        &["kind", "j", "k", "coefficient"],
        alphas.chain(betas),
    )
}

/// Description of a run, written next to its tables.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub tool_version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, config: serde_json::Value, seed: u64) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Self {
            command: command.to_string(),
            config,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path) {
        let name = path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        self.outputs.push(name);
    }

    /// Writes `<command>.manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> AppResult<PathBuf> {
        let path = dir.join(format!("{}.manifest.json", self.command));
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text + "\n").map_err(|source| AppError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

/// Reads a signal table with `x` and `value` columns on a uniform grid.
pub fn read_signal(path: &Path) -> AppResult<SampleGrid> {
    let bad = |msg: String| AppError::usage(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (xi, vi) = (col("x")?, col("value")?);
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let parse = |i: usize| -> AppResult<f64> {
            let field = record.get(i).unwrap_or("").trim();
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("row {}: `{field}` is not a finite number", line + 2)))
        };
        xs.push(parse(xi)?);
        values.push(parse(vi)?);
    }
    let n = xs.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(bad(format!("{n} rows; need a power of two, at least 2")));
    }
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(bad("x must increase".into()));
    }
    for (i, x) in xs.iter().enumerate() {
        if (x - (xs[0] + i as f64 * h)).abs() > 1e-6 * h {
            return Err(bad(format!("row {}: x is not on a uniform grid", i + 2)));
        }
    }
    let domain = wbnn_core::Interval::new(xs[0], xs[0] + n as f64 * h).map_err(|e| bad(e.to_string()))?;
    SampleGrid::new(domain, values).map_err(|e| bad(e.to_string()))
}
