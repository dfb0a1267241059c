use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use crate::error::{Error, Result};

/// Rectangular table of real values with a string metadata block.
#[derive(Debug, Clone, Default)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
    /// Per-row failures, `(row index, message)`. Not part of the emitted
    /// table; see [`ResultTable::warnings_text`].
    pub warnings: Vec<(usize, String)>,
}

impl PartialEq for ResultTable {
    fn eq(&self, other: &Self) -> bool {
        self.columns == other.columns
            && self.metadata == other.metadata
            && self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan())))
    }
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        ResultTable {
            columns,
            ..Default::default()
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.iter().any(|x| x.is_nan())).count()
    }

    pub fn warnings_text(&self) -> String {
        self.warnings.iter().map(|(i, m)| format!("row {i}: {m}\n")).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_number(*x))).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::config("csv", e.into_error().to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut metadata = BTreeMap::new();
        let mut body = String::new();
        for line in text.split_inclusive('\n') {
            if let Some(meta) = line.strip_prefix("# ") {
                let meta = meta.trim_end_matches(['\n', '\r']);
                let (k, v) = meta
                    .split_once(": ")
                    .ok_or_else(|| Error::config("csv", format!("bad metadata line `{meta}`")))?;
                metadata.insert(k.to_string(), v.to_string());
            } else {
                body.push_str(line);
            }
        }
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let columns: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let mut table = ResultTable::new(columns);
        table.metadata = metadata;
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            let row = rec.iter().map(parse_number).collect::<Result<Vec<_>>>()?;
            table.push_row(row)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = JsonTable {
            metadata: self.metadata.clone(),
            columns: self.columns.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(|x| x.is_finite().then_some(*x)).collect()).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::config("json", e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JsonTable = serde_json::from_str(text).map_err(|e| Error::config("json", e.to_string()))?;
        let mut table = ResultTable::new(doc.columns);
        table.metadata = doc.metadata;
        for row in doc.rows {
            table.push_row(row.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())?;
        }
        Ok(table)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Writes the table to `path`.
    pub fn emit(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let text = self.render(format)?;
        let io = |e: std::io::Error| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let mut f = std::fs::File::create(path).map_err(io)?;
        f.write_all(text.as_bytes()).map_err(io)?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    metadata: BTreeMap<String, String>,
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::config("csv", e.to_string())
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::config("csv", format!("not a number: `{s}`")))
}
