//! Two-column `x,y` point files.
//!
//! The header line is optional. Values are written with the shortest decimal
//! form that parses back to the same `f64`, so a write/read cycle is exact.

use std::fs;
use std::path::Path;

use arclen_core::{BrokenLine, Error as CoreError, PointSet};

use crate::error::{CliError, InputError, Result};

pub fn load_points(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(load_points_from_str(&text)?)
}

fn is_header(record: &csv::StringRecord) -> bool {
    record.len() == 2
        && record[0].trim().eq_ignore_ascii_case("x")
        && record[1].trim().eq_ignore_ascii_case("y")
}

pub fn load_points_from_str(text: &str) -> Result<PointSet, InputError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| InputError::Malformed(e.to_string()))?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        if i == 0 && is_header(&record) {
            continue;
        }
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(InputError::ColumnCount {
                row,
                found: record.len(),
            });
        }
        let cell = |column: usize| -> Result<f64, InputError> {
            let raw = &record[column - 1];
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| InputError::NotNumeric {
                    row,
                    column,
                    cell: raw.to_string(),
                })
        };
        xs.push(cell(1)?);
        ys.push(cell(2)?);
        rows.push(row);
    }
    if xs.len() < 2 {
        return Err(InputError::TooFewRows(xs.len()));
    }
    PointSet::new(xs, ys).map_err(|e| match e {
        CoreError::DuplicateAbscissa {
            value,
            first,
            second,
        } => InputError::DuplicateX {
            value,
            first: rows[first],
            second: rows[second],
        },
        other => InputError::Malformed(other.to_string()),
    })
}

pub fn points_to_csv(data: &PointSet) -> String {
    two_columns("x,y", data.xs(), data.ys())
}

/// The fitted ordinates next to their abscissas, header `x,a`.
pub fn fit_to_csv(data: &PointSet, line: &BrokenLine) -> String {
    two_columns("x,a", data.xs(), line.ordinates())
}

fn two_columns(header: &str, left: &[f64], right: &[f64]) -> String {
    let mut out = String::with_capacity(24 * left.len());
    out.push_str(header);
    out.push('\n');
    for (l, r) in left.iter().zip(right) {
        out.push_str(&format!("{l:?},{r:?}\n"));
    }
    out
}
