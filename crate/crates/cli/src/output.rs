//! Tabular output: CSV with a `# meta:` header line, or a JSON document.

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const ARTIFACT: &str = concat!("swanson-cli ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
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

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // JSON has no NaN/inf
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(v.to_string()),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub meta: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, cfg: &RunConfig, columns: &[&str]) -> Self {
        let p = &cfg.params;
        let mut meta = Map::new();
        meta.insert("artifact".into(), json!(ARTIFACT));
        meta.insert("command".into(), json!(command));
        meta.insert(
            "params".into(),
            json!({"omega": p.omega, "alpha": p.alpha, "beta": p.beta, "hbar": p.hbar, "b0": p.b0}),
        );
        meta.insert("theta".into(), json!(p.theta));
        meta.insert("units".into(), json!("hbar = b0 = 1 unless overridden; x in b0, p in hbar/b0, t in hbar/energy"));
        Self { meta, columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.meta.insert(key.into(), value);
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                let _ = writeln!(s, "# meta: {}", Value::Object(self.meta.clone()));
                let _ = writeln!(s, "{}", self.columns.join(","));
                for r in &self.rows {
                    let _ = writeln!(s, "{}", r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
                    .collect();
                let mut s = serde_json::to_string_pretty(&json!({"meta": self.meta, "rows": rows})).expect("serialisable");
                s.push('\n');
                s
            }
        }
    }
}

pub fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Write `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(text.as_bytes())?;
            Ok(h.flush()?)
        }
    }
}

/// Write each named table into `dir`; returns the paths written.
pub fn emit_files(dir: &Path, tables: &[(String, Table)], format: Format) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (name, t) in tables {
        let path = dir.join(format!("{name}.{}", extension(format)));
        emit(&t.render(format), Some(&path))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CommonArgs;

    fn table() -> Table {
        let cfg = RunConfig::from_args(&CommonArgs::default()).unwrap();
        let mut t = Table::new("demo", &cfg, &["a", "b"]);
        t.push(vec![1.5.into(), "x,y".into()]);
        t.push(vec![f64::NAN.into(), 3usize.into()]);
        t
    }

    #[test]
    fn csv_has_meta_header_and_quotes() {
        let s = table().render(Format::Csv);
        let lines: Vec<_> = s.lines().collect();
        assert!(lines[0].starts_with("# meta: {"));
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1.5e0,\"x,y\"");
        assert_eq!(lines[3], "NaN,3");
    }

    #[test]
    fn json_rows_are_objects() {
        let v: Value = serde_json::from_str(&table().render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["b"], "x,y");
        assert_eq!(v["rows"][1]["a"], "NaN");
        assert_eq!(v["meta"]["command"], "demo");
    }
}
