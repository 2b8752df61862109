//! Artifact emission: CSV or JSON data files, each with a `.meta.json` sidecar.

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliResult;

pub const DEFAULT_PRECISION: usize = 9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Self::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Self::Int(i64::from(x))
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Self::Text(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Num(x) => Some(*x),
                Cell::Int(x) => Some(*x as f64),
                Cell::Text(_) => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Table(Table),
    /// Always written as JSON, whatever the selected format.
    Json(Value),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub payload: Payload,
}

impl Artifact {
    pub fn table(name: impl Into<String>, table: Table) -> Self {
        Self {
            name: name.into(),
            payload: Payload::Table(table),
        }
    }

    pub fn json(name: impl Into<String>, value: impl Serialize) -> CliResult<Self> {
        Ok(Self {
            name: name.into(),
            payload: Payload::Json(serde_json::to_value(value)?),
        })
    }

    pub fn as_table(&self) -> Option<&Table> {
        match &self.payload {
            Payload::Table(t) => Some(t),
            Payload::Json(_) => None,
        }
    }

    pub fn as_json(&self) -> Option<&Value> {
        match &self.payload {
            Payload::Json(v) => Some(v),
            Payload::Table(_) => None,
        }
    }
}

/// `significant` significant digits in scientific notation, e.g. `3.20000000e7`.
pub fn format_float(x: f64, significant: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{:.*e}", significant.max(1) - 1, x)
}

/// Rounds to `significant` digits so that JSON output is as stable as CSV output.
pub fn round_significant(x: f64, significant: usize) -> f64 {
    if x.is_finite() {
        format_float(x, significant).parse().unwrap_or(x)
    } else {
        x
    }
}

fn round_value(v: &Value, precision: usize) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_significant(x, precision)))
            .map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.iter().map(|x| round_value(x, precision)).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), round_value(x, precision))).collect()),
        other => other.clone(),
    }
}

fn cell_text(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Num(x) => format_float(*x, precision),
        Cell::Int(x) => x.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn cell_json(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Num(x) => serde_json::Number::from_f64(round_significant(*x, precision)).map_or(Value::Null, Value::Number),
        Cell::Int(x) => Value::from(*x),
        Cell::Text(s) => Value::from(s.as_str()),
    }
}

pub fn table_csv(t: &Table, precision: usize) -> String {
    let mut out = t.columns.join(",");
    out.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|c| cell_text(c, precision)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn table_json(t: &Table, precision: usize) -> Value {
    Value::Array(
        t.rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = t
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.clone(), cell_json(c, precision)))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

fn pretty(v: &Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// How and where artifacts are written.
#[derive(Debug, Clone)]
pub struct Emitter {
    pub dir: Option<PathBuf>,
    pub format: Format,
    pub precision: usize,
    /// Subcommand recorded in every sidecar.
    pub command: String,
    pub seed: u64,
    /// Effective configuration recorded in every sidecar.
    pub config: Value,
}

impl Emitter {
    /// Serialised data file contents and file extension.
    pub fn render(&self, artifact: &Artifact) -> CliResult<(String, &'static str)> {
        Ok(match &artifact.payload {
            Payload::Table(t) => match self.format {
                Format::Csv => (table_csv(t, self.precision), "csv"),
                Format::Json => (pretty(&table_json(t, self.precision))?, "json"),
            },
            Payload::Json(v) => (pretty(&round_value(v, self.precision))?, "json"),
        })
    }

    fn sidecar(&self, artifact: &Artifact, file: &str) -> CliResult<String> {
        let columns = match &artifact.payload {
            Payload::Table(t) => Value::from(t.columns.clone()),
            Payload::Json(_) => Value::Null,
        };
        let meta = serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "artifact": artifact.name,
            "file": file,
            "command": self.command,
            "seed": self.seed,
            "precision": self.precision,
            "format": self.format,
            "columns": columns,
            "config": self.config,
        });
        pretty(&meta)
    }

    /// Writes every artifact and returns the data file paths, or prints to stdout
    /// when no output directory is set.
    pub fn emit(&self, artifacts: &[Artifact]) -> CliResult<Vec<PathBuf>> {
        let mut written = Vec::new();
        match &self.dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                for a in artifacts {
                    let (body, ext) = self.render(a)?;
                    let file = format!("{}.{ext}", a.name);
                    let path = dir.join(&file);
                    std::fs::write(&path, body)?;
                    std::fs::write(dir.join(format!("{}.meta.json", a.name)), self.sidecar(a, &file)?)?;
                    written.push(path);
                }
            }
            None => {
                let stdout = std::io::stdout();
                let mut out = stdout.lock();
                for a in artifacts {
                    let (body, _) = self.render(a)?;
                    writeln!(out, "# {}", a.name)?;
                    out.write_all(body.as_bytes())?;
                }
            }
        }
        Ok(written)
    }
}
