//! CSV tables and JSON run records.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// CSV text: reals with 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, one per row (`NaN` for non-numeric cells).
    pub fn values(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(k) => self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Log-log fit of one column against `h`, with the expected exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub quantity: String,
    pub exponent: f64,
    pub target: Option<f64>,
    pub prefactor: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Named scalar derived from a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub reference: Option<f64>,
}

impl Metric {
    pub fn new(name: &str, value: f64) -> Self {
        Self { name: name.to_string(), value, reference: None }
    }

    pub fn against(name: &str, value: f64, reference: f64) -> Self {
        Self { name: name.to_string(), value, reference: Some(reference) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub h: f64,
    pub message: String,
}

/// Everything a command produced, before it is written out.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunOutput {
    pub table: Table,
    pub fits: Vec<FitReport>,
    pub metrics: Vec<Metric>,
    pub warnings: Vec<String>,
    pub failures: Vec<Failure>,
}

impl RunOutput {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    pub fn fit(&self, quantity: &str) -> Option<&FitReport> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord<'a> {
    pub command: &'a str,
    pub config: &'a str,
    pub input_hash: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    #[serde(flatten)]
    pub output: &'a RunOutput,
}

/// `sha256("blob <len>\0<content>")`, the git object-hash layout.
pub fn content_hash(content: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("blob {}\0", content.len()).as_bytes());
    hasher.update(content.as_bytes());
    format!("{:x}", hasher.finalize())
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Write `<command>.csv` and `<command>.json` into `dir`.
pub fn write_outputs(dir: &Path, record: &RunRecord<'_>) -> Result<(PathBuf, PathBuf), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let csv_path = dir.join(format!("{}.csv", record.command));
    let json_path = dir.join(format!("{}.json", record.command));
    std::fs::write(&csv_path, record.output.table.to_csv()?)
        .map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
    let json = serde_json::to_string_pretty(record).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(&json_path, json + "\n").map_err(|e| CliError::Io(format!("{}: {e}", json_path.display())))?;
    Ok((csv_path, json_path))
}
