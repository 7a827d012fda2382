//! CSV tables with a `#` comment header identifying how they were made.

use std::io::Write;
use std::path::Path;

use crate::Result;

/// Version string written into every output header.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance lines written before the column header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvHeader {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    /// Extra `key: value` comment lines.
    pub extra: Vec<(String, String)>,
}

impl CsvHeader {
    pub fn new(command: &str, config_hash: String, seed: u64) -> Self {
        CsvHeader { command: command.to_string(), config_hash, seed, extra: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }
}

/// A table: fixed columns and rows of numbers or labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest text that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        CsvTable { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn write_to<W: Write>(&self, header: &CsvHeader, out: W) -> Result<()> {
        let mut out = out;
        writeln!(out, "# command: {}", header.command)?;
        writeln!(out, "# config_hash: {}", header.config_hash)?;
        writeln!(out, "# seed: {}", header.seed)?;
        writeln!(out, "# code_version: {CODE_VERSION}")?;
        for (k, v) in &header.extra {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write(&self, header: &CsvHeader, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        self.write_to(header, std::fs::File::create(path)?)
    }

    /// Read back a file written by [`CsvTable::write`], skipping comments.
    pub fn read(path: &Path) -> Result<(Vec<String>, CsvTable)> {
        let text = std::fs::read_to_string(path)?;
        let comments: Vec<String> = text.lines().filter(|l| l.starts_with('#')).map(str::to_string).collect();
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let columns = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()
            .map_err(csv_err)?;
        Ok((comments, CsvTable { columns, rows }))
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}
