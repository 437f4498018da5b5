use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Input(#[from] InputError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] arclen_core::Error),

    #[error("cannot serialize report: {0}")]
    Serialize(#[from] serde_json::Error),
}

/// Problems with the contents of a point file. Rows and columns are 1-based
/// and count the header line when there is one.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error("row {row}, column {column}: {cell:?} is not a finite number")]
    NotNumeric {
        row: usize,
        column: usize,
        cell: String,
    },

    #[error("row {row}: expected 2 columns, found {found}")]
    ColumnCount { row: usize, found: usize },

    #[error("duplicate x value {value} on rows {first} and {second}")]
    DuplicateX {
        value: f64,
        first: usize,
        second: usize,
    },

    #[error("at least 2 data rows are required, found {0}")]
    TooFewRows(usize),

    #[error("malformed CSV: {0}")]
    Malformed(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
