//! Tables of figure data and their CSV and JSON encodings.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format_float(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// Shortest representation that reads back to the same bits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Set when a sweep stopped early; the message goes into the trailer.
    pub incomplete: Option<String>,
    /// Extra JSON fields: configuration echo, solver diagnostics, seeds.
    pub provenance: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            incomplete: None,
            provenance: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self, deterministic: bool) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        let mut buf = w.into_inner().map_err(|e| e.into_error())?;
        if !deterministic {
            writeln!(buf, "# generated_at_unix {}", unix_time())?;
        }
        if let Some(msg) = &self.incomplete {
            writeln!(buf, "# INCOMPLETE {}", msg.replace('\n', " "))?;
        }
        Ok(buf)
    }

    pub fn to_json(&self, deterministic: bool) -> io::Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("columns".into(), json!(self.columns));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("complete".into(), json!(self.incomplete.is_none()));
        if let Some(msg) = &self.incomplete {
            doc.insert("incomplete".into(), json!(msg));
        }
        for (k, v) in &self.provenance {
            doc.insert(k.clone(), v.clone());
        }
        if !deterministic {
            doc.insert("generated_at_unix".into(), json!(unix_time()));
        }
        let mut buf = serde_json::to_vec_pretty(&Value::Object(doc))?;
        buf.push(b'\n');
        Ok(buf)
    }

    pub fn encode(&self, format: Format, deterministic: bool) -> io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(deterministic),
            Format::Json => self.to_json(deterministic),
        }
    }

    /// Writes to `out`, or to stdout without a path.
    pub fn write(&self, out: Option<&Path>, format: Format, deterministic: bool) -> io::Result<()> {
        let bytes = self.encode(format, deterministic)?;
        match out {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(path, bytes)
            }
            None => io::stdout().lock().write_all(&bytes),
        }
    }
}

fn unix_time() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
