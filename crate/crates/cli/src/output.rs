use std::fs;
use std::io::{self, Write};
use std::path::Path;

use betadom::stats::Verdict;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Command, Format, OutputOpts};
use crate::error::CliError;

/// 17 significant digits, enough to round-trip any f64.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Per-replica rows with a fixed header; `replica` is always the first column.
pub struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str], rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        Self { columns, rows }
    }

    fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["replica"];
        header.extend_from_slice(self.columns);
        w.write_record(&header)?;
        for (r, row) in self.rows.iter().enumerate() {
            let mut record = vec![r.to_string()];
            record.extend(row.iter().map(|&x| float(x)));
            w.write_record(&record)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    fn to_json(&self, config: &Command) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut obj = Map::new();
                obj.insert("replica".into(), r.into());
                for (name, &x) in self.columns.iter().zip(row) {
                    obj.insert((*name).into(), x.into());
                }
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "config": config, "samples": rows })
    }
}

/// JSON report shared by every test-style subcommand.
#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub test: &'static str,
    pub params: Value,
    pub n: usize,
    pub m: Option<usize>,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub verdict: Verdict,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
    pub config: &'a Command,
}

pub fn emit(output: &OutputOpts, bytes: &[u8]) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_file(path, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the samples in the requested format (CSV unless asked otherwise).
pub fn emit_table(table: &Table, config: &Command, output: &OutputOpts) -> Result<(), CliError> {
    let bytes = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv()?,
        Format::Json => json_bytes(&table.to_json(config))?,
    };
    emit(output, &bytes)
}

/// Writes a report (JSON unless asked otherwise; CSV falls back to the
/// per-replica table when one exists).
pub fn emit_report(report: &Report<'_>, table: Option<&Table>, output: &OutputOpts) -> Result<(), CliError> {
    let bytes = match (output.format.unwrap_or(Format::Json), table) {
        (Format::Csv, Some(t)) => t.to_csv()?,
        (Format::Csv, None) => return Err(CliError::Usage("this subcommand has no CSV output".into())),
        (Format::Json, _) => json_bytes(report)?,
    };
    emit(output, &bytes)
}

pub fn emit_json<T: Serialize>(value: &T, output: &OutputOpts) -> Result<(), CliError> {
    emit(output, &json_bytes(value)?)
}
