//! Tabular output as CSV or JSON with a fixed number of decimals.

use serde_json::{json, Map, Value};

use super::Failure;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Num(f64),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Configuration echo, emitted as `#` lines in CSV and a `config` key in JSON.
    pub echo: Option<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: usize) -> Result<Vec<u8>, Failure> {
        match format {
            Format::Csv => self.csv(precision),
            Format::Json => self.json(precision),
        }
    }

    fn csv(&self, precision: usize) -> Result<Vec<u8>, Failure> {
        let mut out = Vec::new();
        if let Some(echo) = &self.echo {
            for line in echo.lines() {
                out.extend_from_slice(format!("# {line}\n").as_bytes());
            }
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Failure::io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| text(c, precision)))
                .map_err(io)?;
        }
        w.into_inner().map_err(|e| Failure::io(e.to_string()))
    }

    fn json(&self, precision: usize) -> Result<Vec<u8>, Failure> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (col, c) in self.columns.iter().zip(row) {
                    m.insert(col.to_string(), value(c, precision));
                }
                Value::Object(m)
            })
            .collect();
        let mut doc = json!({ "columns": self.columns, "rows": rows });
        if let Some(echo) = &self.echo {
            doc["config"] = Value::String(echo.clone());
        }
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| Failure::io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }
}

pub fn fmt_num(x: f64, precision: usize) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        let s = format!("{x:.precision$}");
        // Avoid "-0.0000".
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

fn text(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Text(s) => s.clone(),
        Cell::Int(x) => x.to_string(),
        Cell::Num(x) => fmt_num(*x, precision),
        Cell::Bool(b) => b.to_string(),
    }
}

fn value(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Int(x) => json!(x),
        Cell::Num(x) if x.is_finite() => {
            let s = fmt_num(*x, precision);
            serde_json::from_str(&s).unwrap_or(Value::String(s))
        }
        Cell::Num(x) => Value::String(fmt_num(*x, precision)),
        Cell::Bool(b) => json!(b),
    }
}
