use anyhow::{Context, Result};
use std::path::Path;

/// Bumped whenever a header below changes; part of every output file name.
pub const SCHEMA_VERSION: u32 = 1;

pub const ROUTING_SEED_HEADER: &[&str] =
    &["grid", "k", "demands", "seed", "method", "congestion", "feasible", "c_star", "reference", "wall_ms"];

pub const ROUTING_SUMMARY_HEADER: &[&str] = &["grid", "k", "demands", "method", "mean", "gap_pct", "stddev", "n"];

pub const COVERAGE_HEADER: &[&str] =
    &["instance", "instance_hash", "budget", "method", "rho", "seed", "value", "cost", "wall_ms"];

pub const PTAS_HEADER: &[&str] = &["points", "d", "budget", "ell", "shift_h", "shift_v", "subgrids", "value", "cost"];

/// Rows under a fixed header, written as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub name: &'static str,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl ResultTable {
    pub fn new(name: &'static str, header: &'static [&'static str]) -> Self {
        Self {
            name,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    /// Sorts rows lexicographically so output does not depend on scheduling.
    pub fn sort(&mut self) {
        self.rows.sort();
    }

    pub fn file_name(&self) -> String {
        format!("{}.v{SCHEMA_VERSION}.csv", self.name)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Writes the table into `dir` and returns the file path.
    pub fn write_to(&self, dir: &Path) -> Result<std::path::PathBuf> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(self.file_name());
        std::fs::write(&path, self.to_csv()?).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }
}

/// Formats a float without trailing noise.
pub fn num(v: f64) -> String {
    if v == v.round() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.6}")
    }
}
