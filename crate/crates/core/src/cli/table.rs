use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CliError, OutputFormat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub params: BTreeMap<String, Vec<String>>,
    pub version: String,
    pub branch_policy: String,
    /// Free-form row labels, e.g. the check names of `verify`.
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(metadata: Metadata, columns: Vec<Column>) -> Self {
        Self {
            metadata,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

/// Serializes the table. Output depends only on the table contents.
pub fn render(table: &ResultTable, format: OutputFormat) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(table).map_err(|e| CliError::Io {
                path: "<json>".into(),
                message: e.to_string(),
            })?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let io = |e: csv::Error| CliError::Io {
                path: "<csv>".into(),
                message: e.to_string(),
            };
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
            w.write_record(table.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)))
                .map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|v| format!("{v:?}"))).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::Io {
                path: "<csv>".into(),
                message: e.to_string(),
            })
        }
    }
}

/// Writes the table to `path`, or to standard output.
pub fn emit(table: &ResultTable, format: OutputFormat, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = render(table, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            })
        }
    }
}
