//! Run outputs: `report.jsonl`, `report.csv` and `config.resolved`.
//!
//! `report.jsonl` starts with a format/config line and a timestamp line; the
//! timestamp is the only part that differs between identical runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::config::{RunConfig, FORMAT_VERSION};
use crate::error::{Error, Result};

/// Records of a finished run, as JSON objects with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub columns: &'static [&'static str],
    pub records: Vec<Value>,
}

impl RunOutput {
    pub fn new(columns: &'static [&'static str]) -> Self {
        RunOutput { columns, records: Vec::new() }
    }

    pub fn push<T: Serialize>(&mut self, record: &T) -> Result<()> {
        let v = serde_json::to_value(record).map_err(|e| Error::Io(e.to_string()))?;
        if !v.is_object() {
            return Err(Error::Io("records must serialize to JSON objects".into()));
        }
        self.records.push(v);
        Ok(())
    }

    /// JSON-lines body (one record per line, no header lines).
    pub fn jsonl_body(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn csv_body(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.records {
            let row: Vec<String> = self.columns.iter().map(|c| csv_cell(r.get(*c).unwrap_or(&Value::Null))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Arrays join with `;`, nested arrays with `|`; strings are quoted when needed.
fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let nested = items.iter().any(Value::is_array);
            let sep = if nested { "|" } else { ";" };
            items.iter().map(csv_cell).collect::<Vec<_>>().join(sep)
        }
        other => other.to_string(),
    }
}

pub fn header_line(config: &RunConfig) -> String {
    serde_json::json!({ "format": FORMAT_VERSION, "config": config.to_json() }).to_string()
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Writes the three output files into the config's `out` directory and
/// returns that directory.
pub fn write_run(config: &RunConfig, output: &RunOutput) -> Result<PathBuf> {
    let dir = PathBuf::from(config.text("out")?);
    write_run_to(&dir, config, output)?;
    Ok(dir)
}

pub fn write_run_to(dir: &Path, config: &RunConfig, output: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let ts = timestamp();
    let jsonl =
        format!("{}\n{}\n{}", header_line(config), serde_json::json!({ "timestamp_unix": ts }), output.jsonl_body());
    let commented: String = config.to_text().lines().map(|l| format!("# {l}\n")).collect();
    let csv = format!("# {FORMAT_VERSION}\n# timestamp_unix {ts}\n{commented}{}", output.csv_body());
    let resolved = format!("# {FORMAT_VERSION}\n{}", config.to_text());
    for (name, body) in [("report.jsonl", jsonl), ("report.csv", csv), ("config.resolved", resolved)] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Drops the timestamp line of a `report.jsonl`.
pub fn deterministic_payload(jsonl: &str) -> String {
    jsonl.lines().enumerate().filter(|(i, _)| *i != 1).map(|(_, l)| format!("{l}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        t: Vec<f64>,
        name: &'static str,
        hit: Option<bool>,
    }

    #[test]
    fn csv_cells() {
        let mut out = RunOutput::new(&["t", "name", "hit"]);
        out.push(&Row { t: vec![1.0, 2.5], name: "a,b", hit: None }).unwrap();
        assert_eq!(out.csv_body(), "t,name,hit\n1.0;2.5,\"a,b\",\n");
    }

    #[test]
    fn files_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new("constants").unwrap();
        cfg.set("out", &dir.path().to_string_lossy()).unwrap();
        let cfg = cfg.resolved().unwrap();
        let mut out = RunOutput::new(&["t", "name", "hit"]);
        out.push(&Row { t: vec![1.0], name: "x", hit: Some(true) }).unwrap();
        write_run(&cfg, &out).unwrap();
        let jsonl = fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
        let lines: Vec<&str> = jsonl.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains(FORMAT_VERSION));
        assert!(lines[1].contains("timestamp_unix"));
        assert_eq!(lines[2], r#"{"t":[1.0],"name":"x","hit":true}"#);
        let resolved = fs::read_to_string(dir.path().join("config.resolved")).unwrap();
        assert_eq!(RunConfig::parse(&resolved).unwrap(), cfg);
        assert!(deterministic_payload(&jsonl).lines().all(|l| !l.contains("timestamp")));
    }
}
