//! Output plumbing: table, JSON, and CSV rendering with exact integers.
//!
//! JSON is canonical by construction: values are built as
//! [`serde_json::Value`] maps (sorted keys) and every integer, however
//! large, is emitted as a bare JSON number via the arbitrary-precision
//! backing, so parsing the output and re-rendering it is byte-identical.
//! No value anywhere is a float.

use std::fmt::Display;
use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Where and how a command writes its report.
pub struct Sink {
    pub format: Format,
    pub out: Option<std::path::PathBuf>,
}

impl Sink {
    pub fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                if !text.ends_with('\n') {
                    stdout.write_all(b"\n")?;
                }
                Ok(())
            }
            Some(path) => {
                let mut contents = text.to_string();
                if !contents.ends_with('\n') {
                    contents.push('\n');
                }
                std::fs::write(path, contents)?;
                Ok(())
            }
        }
    }

    /// Emits one of the three renderings of a command report.
    pub fn emit(&self, report: &Report) -> Result<(), Failure> {
        let text = match self.format {
            Format::Table => report.table.trim_end().to_string(),
            Format::Json => canonical_json(&report.json),
            Format::Csv => {
                let csv = report
                    .csv
                    .as_ref()
                    .ok_or_else(|| Failure::Input("no csv rendering for this command".into()))?;
                csv.trim_end().to_string()
            }
        };
        self.write(&text)
    }
}

/// A fully rendered command result.
pub struct Report {
    pub table: String,
    pub json: Value,
    pub csv: Option<String>,
}

pub fn canonical_json(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

/// An exact integer as a bare JSON number, independent of width.
pub fn int_json(n: impl Display) -> Value {
    let text = n.to_string();
    let number: Number = text.parse().expect("integer literal is a JSON number");
    Value::Number(number)
}

pub fn ints_json<T: Display>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(int_json).collect())
}

pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}

/// Fixed-width table with right-aligned columns.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            for (i, cell) in cells.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{cell:>width$}", width = widths[i]));
            }
            out.push('\n');
        };
        line(&self.header, &mut out);
        for row in &self.rows {
            line(row, &mut out);
        }
        out
    }

    /// The same cells as CSV, no alignment padding.
    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
