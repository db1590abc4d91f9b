//! CSV and JSON report files.
//!
//! Every file starts with a header block recording the resolved config and
//! the artifact version. Reports are byte-deterministic: floats print in
//! Rust's shortest round-trip form and rows keep a fixed order, so the same
//! config always reproduces the same bytes (wall time goes to stdout, never
//! into the files).

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved-config lines shared by the CSV header and the JSON summary.
#[derive(Clone, Debug, Default)]
pub struct ReportHeader {
    pub experiment: String,
    /// `key = value` pairs in a fixed order.
    pub config: Vec<(String, String)>,
}

impl ReportHeader {
    pub fn new(experiment: &str) -> Self {
        ReportHeader { experiment: experiment.into(), config: Vec::new() }
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.config.push((key.into(), value.to_string()));
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# romanoff {ARTIFACT_VERSION}"),
            format!("# experiment = {}", self.experiment),
        ];
        for (k, v) in &self.config {
            lines.push(format!("# {k} = {v}"));
        }
        lines
    }

    pub fn config_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.config {
            map.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        serde_json::Value::Object(map)
    }
}

/// A CSV table: named columns plus preformatted rows.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }
}

/// Shortest-round-trip float formatting; deterministic for equal inputs.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn write_csv(path: &Path, header: &ReportHeader, table: &Table) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for line in header.comment_lines() {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "{}", table.columns.join(","))?;
    for row in &table.rows {
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(path: &Path, header: &ReportHeader, summary: serde_json::Value) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut root = serde_json::Map::new();
    root.insert("version".into(), serde_json::Value::String(ARTIFACT_VERSION.into()));
    root.insert("experiment".into(), serde_json::Value::String(header.experiment.clone()));
    root.insert("config".into(), header.config_json());
    root.insert("summary".into(), summary);
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &serde_json::Value::Object(root))
        .map_err(std::io::Error::other)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Output selection for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl std::str::FromStr for OutputFormat {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            other => Err(crate::error::Error::Config(format!(
                "format must be csv, json, or both; got {other:?}"
            ))),
        }
    }
}

/// Write the selected files next to the stem: `<stem>.csv` / `<stem>.json`.
pub fn write_reports(
    stem: &Path,
    format: OutputFormat,
    header: &ReportHeader,
    table: &Table,
    summary: serde_json::Value,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
        let path = stem.with_extension("csv");
        write_csv(&path, header, table)?;
        written.push(path);
    }
    if matches!(format, OutputFormat::Json | OutputFormat::Both) {
        let path = stem.with_extension("json");
        write_json(&path, header, summary)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut header = ReportHeader::new("demo");
        header.push("x", 100);
        let mut table = Table::new(&["statistic", "value"]);
        table.row(vec!["count".into(), "7".into()]);
        write_csv(&path, &header, &table).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&format!("# romanoff {ARTIFACT_VERSION}\n# experiment = demo\n# x = 100\n")));
        assert!(text.ends_with("statistic,value\ncount,7\n"));
    }

    #[test]
    fn json_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        let header = ReportHeader::new("demo");
        write_json(&path, &header, serde_json::json!({"n": 1})).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["experiment"], "demo");
        assert_eq!(v["summary"]["n"], 1);
    }

    #[test]
    fn float_formatting_is_shortest_roundtrip() {
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(2.0), "2");
        let x = 1.0 / 3.0;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }
}
