use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    /// `|value − target| ≤ tolerance`
    #[serde(rename = "within")]
    Within,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    pub passed: bool,
    /// Library operation the value comes from.
    pub source: String,
}

impl Metric {
    pub fn at_most(name: &str, value: f64, tolerance: f64, source: &str) -> Self {
        Self::build(name, value, Relation::AtMost, tolerance, None, value <= tolerance, source)
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64, source: &str) -> Self {
        Self::build(name, value, Relation::AtLeast, tolerance, None, value >= tolerance, source)
    }

    pub fn within(name: &str, value: f64, target: f64, tolerance: f64, source: &str) -> Self {
        Self::build(name, value, Relation::Within, tolerance, Some(target), (value - target).abs() <= tolerance, source)
    }

    fn build(name: &str, value: f64, relation: Relation, tolerance: f64, target: Option<f64>, ok: bool, source: &str) -> Self {
        Metric {
            name: name.into(),
            value,
            relation,
            tolerance,
            target,
            // NaN compares false, so undefined values fail
            passed: ok,
            source: source.into(),
        }
    }
}

/// A table written as one CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Series { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub code_version: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub kind: String,
    pub passed: bool,
    pub metrics: Vec<Metric>,
    pub series: Vec<String>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub tables: Vec<Series>,
    /// Extra binary outputs `(file name, bytes)`.
    #[serde(skip)]
    pub attachments: Vec<(String, Vec<u8>)>,
}

pub fn config_hash(config: &RunConfig) -> String {
    let digest = Sha256::digest(config.emit().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(config: &RunConfig, metrics: Vec<Metric>, tables: Vec<Series>) -> Self {
        Report {
            kind: config.run.kind.to_string(),
            passed: metrics.iter().all(|m| m.passed),
            series: tables.iter().map(|t| format!("{}.csv", t.name)).collect(),
            metrics,
            provenance: Provenance {
                config_sha256: config_hash(config),
                code_version: env!("CARGO_PKG_VERSION").into(),
                seed: config.run.seed,
            },
            tables,
            attachments: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Write `report.json`, `config.toml` and one CSV per series; returns the paths written.
pub fn emit_report(report: &Report, config: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: &str, bytes: &[u8]| -> Result<(), CliError> {
        let path = dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
        written.push(path);
        Ok(())
    };
    put("report.json", report.to_json().as_bytes())?;
    put("config.toml", config.emit().as_bytes())?;
    for table in &report.tables {
        let mut w = csv::Writer::from_writer(Vec::new());
        let name = format!("{}.csv", table.name);
        w.write_record(&table.header).map_err(|e| io_err(&dir.join(&name), e))?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(|e| io_err(&dir.join(&name), e))?;
        }
        let bytes = w.into_inner().map_err(|e| io_err(&dir.join(&name), e))?;
        put(&name, &bytes)?;
    }
    for (name, bytes) in &report.attachments {
        put(name, bytes)?;
    }
    Ok(written)
}
