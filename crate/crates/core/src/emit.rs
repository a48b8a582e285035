//! Rendering of tables and reports as JSON, CSV or markdown.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    #[default]
    Json,
    Csv,
    Markdown,
}

impl FromStr for EmitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(EmitFormat::Json),
            "csv" => Ok(EmitFormat::Csv),
            "markdown" | "md" => Ok(EmitFormat::Markdown),
            other => Err(Error::InvalidArgument(format!("unknown emit format {other:?} (json, csv, markdown)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a command produces: a structured document for JSON, and tables for
/// the other formats.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    pub tables: Vec<Table>,
}

pub fn render(out: &Output, format: EmitFormat) -> Result<String> {
    match format {
        EmitFormat::Json => {
            let mut s = serde_json::to_string_pretty(&out.json)?;
            s.push('\n');
            Ok(s)
        }
        EmitFormat::Csv => {
            let mut s = String::new();
            for (i, t) in out.tables.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                writeln!(s, "# {}", t.title).unwrap();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&t.columns).map_err(csv_err)?;
                for row in &t.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                s.push_str(&String::from_utf8(bytes).expect("csv of utf-8 input"));
            }
            Ok(s)
        }
        EmitFormat::Markdown => {
            let mut s = String::new();
            for (i, t) in out.tables.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                writeln!(s, "### {}\n", t.title).unwrap();
                writeln!(s, "| {} |", t.columns.join(" | ")).unwrap();
                writeln!(s, "|{}", "---|".repeat(t.columns.len())).unwrap();
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
                    writeln!(s, "| {} |", cells.join(" | ")).unwrap();
                }
            }
            Ok(s)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

/// An (n × k) grid from a lookup, blank outside each row's support.
pub fn grid(title: &str, rows: impl IntoIterator<Item = (u32, Vec<String>)>) -> Table {
    let rows: Vec<(u32, Vec<String>)> = rows.into_iter().collect();
    let width = rows.iter().map(|(_, r)| r.len()).max().unwrap_or(0);
    let mut columns = vec!["n".to_string()];
    columns.extend((0..width).map(|k| format!("k={k}")));
    let mut t = Table { title: title.to_string(), columns, rows: Vec::new() };
    for (n, mut r) in rows {
        r.resize(width, String::new());
        let mut row = vec![n.to_string()];
        row.extend(r);
        t.rows.push(row);
    }
    t
}
