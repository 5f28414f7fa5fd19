//! Writers and readers for every file the CLI emits. Numbers are written in
//! the shortest form that parses back to the same `f64`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use geohull_core::montecarlo::{EstimatorSummary, ScalingFit};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "model",
    "statistic",
    "n",
    "mean",
    "var",
    "stderr_mean",
    "stderr_var",
    "replications",
    "seed",
];

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io_err(path, e))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>, CliError> {
    csv::ReaderBuilder::new().from_path(path).map_err(|e| io_err(path, e))
}

pub fn write_summaries(path: &Path, rows: &[EstimatorSummary]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(SUMMARY_COLUMNS).map_err(|e| io_err(path, e))?;
    for s in rows {
        w.write_record([
            s.model.to_string(),
            s.statistic.to_string(),
            s.n.to_string(),
            s.mean.to_string(),
            s.variance.to_string(),
            s.stderr_mean.to_string(),
            s.stderr_variance.to_string(),
            s.replications.to_string(),
            s.seed.to_string(),
        ])
        .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_summaries(path: &Path) -> Result<Vec<EstimatorSummary>, CliError> {
    let mut r = csv_reader(path)?;
    let header: Vec<String> = r.headers().map_err(|e| io_err(path, e))?.iter().map(String::from).collect();
    if header != SUMMARY_COLUMNS {
        return Err(CliError::Config(format!("{}: unexpected columns {header:?}", path.display())));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let bad = |col: &str| CliError::Config(format!("{}: row {}: bad {col}", path.display(), line + 1));
        let f = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(SUMMARY_COLUMNS[i]));
        out.push(EstimatorSummary {
            model: rec[0].parse().map_err(|_| bad("model"))?,
            statistic: rec[1].parse().map_err(|_| bad("statistic"))?,
            n: rec[2].parse().map_err(|_| bad("n"))?,
            mean: f(3)?,
            variance: f(4)?,
            stderr_mean: f(5)?,
            stderr_variance: f(6)?,
            replications: rec[7].parse().map_err(|_| bad("replications"))?,
            seed: rec[8].parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(out)
}

/// Plane points, one `x,y` row each.
pub fn write_points(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_points(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv_reader(path)?;
    let header = r.headers().map_err(|e| io_err(path, e))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        rows.push(
            rec.iter()
                .map(|v| v.parse::<f64>().map_err(|_| CliError::Config(format!("{}: bad number {v:?}", path.display()))))
                .collect::<Result<_, _>>()?,
        );
    }
    Ok((header, rows))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| io_err(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub statistic: String,
    pub target: String,
    pub slope: f64,
    pub ci95: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points: Vec<(usize, f64)>,
}

impl ScalingReport {
    pub fn new(statistic: &str, target: &str, fit: &ScalingFit, points: Vec<(usize, f64)>) -> Self {
        Self {
            statistic: statistic.into(),
            target: target.into(),
            slope: fit.slope,
            ci95: fit.ci95,
            intercept: fit.intercept,
            residual_rms: fit.residual_rms,
            points,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: serde_json::Value,
    pub config_hash: String,
    pub started_at: String,
    pub finished_at: String,
    pub version: String,
    pub outputs: Vec<String>,
}
