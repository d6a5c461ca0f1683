//! CSV tables, run manifests and the on-disk layout of a run directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::checkpoint::Checkpoint;
use super::config::RunConfig;
use crate::error::{Error, Result};

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One cell of a CSV row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_f64(*x),
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Everything an experiment produces, before it touches the disk.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub tables: Vec<(String, CsvTable)>,
    pub checkpoints: Vec<(String, Checkpoint)>,
    /// Human-readable findings and warnings, echoed into the manifest.
    pub notes: Vec<String>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&CsvTable> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub program: &'static str,
    pub version: &'static str,
    pub experiment: String,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub files: Vec<String>,
    pub notes: &'a [String],
    pub config: &'a RunConfig,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Write tables, checkpoints and `manifest.json` into `dir`; returns the paths written.
pub fn write_outputs(report: &Report, config: &RunConfig, dir: &Path, wall_time: f64) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (name, table) in &report.tables {
        let path = dir.join(name);
        write_file(&path, table.to_csv().as_bytes())?;
        written.push(path);
    }
    for (name, ckpt) in &report.checkpoints {
        let path = dir.join(name);
        ckpt.write(&path)?;
        written.push(path);
    }
    let manifest = Manifest {
        program: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment: config.experiment.map(|e| e.to_string()).unwrap_or_default(),
        seed: config.seed,
        wall_time_seconds: wall_time,
        files: written
            .iter()
            .map(|p| p.file_name().expect("file").to_string_lossy().into_owned())
            .collect(),
        notes: &report.notes,
        config,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&path, text.as_bytes())?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = CsvTable::new(&["k", "x", "name"]);
        t.push(vec![3usize.into(), 0.5.into(), "u".into()]);
        assert_eq!(t.to_csv(), "k,x,name\n3,5.0000000000000000e-1,u\n");
    }
}
