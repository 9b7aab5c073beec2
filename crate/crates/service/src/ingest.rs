//! Turning uploaded text into rows.

use crate::error::ServiceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Lines,
    Csv,
}

/// Rows of one column, kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub rows: Vec<String>,
}

pub const DEFAULT_COLUMN: &str = reshape_core::program::DEFAULT_COLUMN;

/// One row per line. Line terminators are dropped, nothing else is.
pub fn parse_lines(data: &str, name: Option<&str>) -> Result<Column, ServiceError> {
    if data.is_empty() {
        return Err(ServiceError::EmptyPayload);
    }
    Ok(Column {
        name: name.unwrap_or(DEFAULT_COLUMN).to_string(),
        rows: data.lines().map(str::to_string).collect(),
    })
}

/// The named column of a CSV document with a header row.
pub fn parse_csv(data: &str, column: Option<&str>) -> Result<Column, ServiceError> {
    let column = column.ok_or(ServiceError::ColumnRequired)?;
    if data.is_empty() {
        return Err(ServiceError::EmptyPayload);
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(data.as_bytes());
    let headers = reader.headers().map_err(|e| ServiceError::BadCsv(e.to_string()))?.clone();
    let index = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| ServiceError::MissingColumn(column.to_string()))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ServiceError::BadCsv(e.to_string()))?;
        rows.push(record.get(index).unwrap_or_default().to_string());
    }
    if rows.is_empty() {
        return Err(ServiceError::EmptyPayload);
    }
    Ok(Column {
        name: column.to_string(),
        rows,
    })
}

pub fn parse(data: &str, format: Format, column: Option<&str>, cap: usize) -> Result<Column, ServiceError> {
    let parsed = match format {
        Format::Lines => parse_lines(data, column)?,
        Format::Csv => parse_csv(data, column)?,
    };
    if parsed.rows.len() > cap {
        return Err(ServiceError::TooManyRows {
            rows: parsed.rows.len(),
            cap,
        });
    }
    Ok(parsed)
}
