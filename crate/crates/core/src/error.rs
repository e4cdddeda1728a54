use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: file is empty")]
    EmptyFile { path: PathBuf },
    #[error("{path}: label column `{column}` not found in header")]
    MissingLabelColumn { path: PathBuf, column: String },
    #[error("{path}: header does not match expected schema ({detail})")]
    SchemaMismatch { path: PathBuf, detail: String },
    #[error("{path}:{line}: expected {expected} fields, found {found}")]
    RaggedRow {
        path: PathBuf,
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("column `{0}` has no non-missing values")]
    ColumnAllMissing(String),
    #[error("unknown label name(s): {0:?}")]
    UnknownLabels(Vec<String>),
    #[error("class `{class}` has {count} row(s); need at least {needed}")]
    ClassTooSmall {
        class: String,
        count: usize,
        needed: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input")]
    EmptyInput,
    #[error("at least two classes are required, found {0}")]
    SingleClass(usize),
    #[error("feature count mismatch: model expects {expected}, got {found}")]
    FeatureMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("k = {k} exceeds the {available} stored rows")]
    TooFewNeighbors { k: usize, available: usize },
    #[error("class `{0}` has no positive rows")]
    ClassAbsent(String),
    #[error("class `{0}` has no negative rows")]
    NoNegatives(String),
    #[error("grid cell {index} ({params}): {source}")]
    GridCell {
        index: usize,
        params: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
