use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};
use specmom::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub subcommand: &'static str,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(subcommand: &'static str, seed: Option<u64>) -> Self {
        Manifest {
            subcommand,
            args: std::env::args().skip(1).collect(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Cplx(Complex),
    Text(String),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Complex> for Cell {
    fn from(v: Complex) -> Self {
        Cell::Cplx(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    pub fn csv_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:?}"),
            Cell::Cplx(v) if v.im == 0.0 => format!("{:?}", v.re),
            Cell::Cplx(v) => format!(
                "{:?}{}{:?}i",
                v.re,
                if v.im < 0.0 { "-" } else { "+" },
                v.im.abs()
            ),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) => json!(v),
            Cell::Cplx(v) => json!({ "re": v.re, "im": v.im }),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Column-oriented result with trailing summary entries.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, String)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: impl ToString) {
        self.summary.push((key, value.to_string()));
    }

    pub fn note_num(&mut self, key: &'static str, value: f64) {
        self.note(key, Cell::Num(value).csv_text());
    }

    pub fn write(
        &self,
        out: &mut impl Write,
        manifest: &Manifest,
        format: Format,
    ) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "# {}", serde_json::to_string(manifest)?)?;
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv_text).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
                for (k, v) in &self.summary {
                    writeln!(out, "# {k}: {v}")?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let summary: Map<String, Value> = self
                    .summary
                    .iter()
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect();
                let doc = json!({ "manifest": manifest, "records": rows, "summary": summary });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
        }
        out.flush()
    }
}
