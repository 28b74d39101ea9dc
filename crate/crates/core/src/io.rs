//! Reading real sequences from CSV or JSON.
//!
//! CSV: one value per line in the first column; a single non-numeric first
//! line is taken as a header. JSON: a flat array of numbers.

use std::fs;
use std::path::Path;

use crate::prob::RealSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// `.json` files and text starting with `[` are JSON, anything else CSV.
    pub fn detect(path: Option<&Path>, text: &str) -> Self {
        let by_extension = path
            .and_then(|p| p.extension())
            .map(|ext| ext.eq_ignore_ascii_case("json"))
            .unwrap_or(false);
        if by_extension || text.trim_start().starts_with('[') {
            InputFormat::Json
        } else {
            InputFormat::Csv
        }
    }
}

pub fn parse_sequence(text: &str, format: InputFormat) -> Result<RealSequence> {
    let values = match format {
        InputFormat::Json => serde_json::from_str::<Vec<f64>>(text)
            .map_err(|e| Error::Parse(format!("expected a JSON array of numbers: {e}")))?,
        InputFormat::Csv => parse_csv_column(text)?,
    };
    RealSequence::new(values)
}

fn parse_csv_column(text: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut seen_row = false;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let Some(field) = record.get(0).filter(|f| !f.is_empty()) else {
            continue;
        };
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if !seen_row => {}
            Err(_) => {
                return Err(Error::Parse(format!("line {}: {field:?} is not a number", line + 1)))
            }
        }
        seen_row = true;
    }
    Ok(values)
}

pub fn read_sequence(path: &Path) -> Result<RealSequence> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_sequence(&text, InputFormat::detect(Some(path), &text))
}
