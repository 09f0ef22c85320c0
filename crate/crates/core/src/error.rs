use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed row {row}: expected {expected} fields, found {found}")]
    MalformedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-numeric cell at row {row}, column {column}: {value:?}")]
    NonNumeric {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("dataset needs at least 2 points, found {0}")]
    TooFewPoints(usize),

    #[error("rows must share one dimension: row {row} has {found}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("label column {0} not found")]
    UnknownLabelColumn(String),

    #[error("gold labels have length {labels}, dataset has {points} points")]
    LabelLength { labels: usize, points: usize },

    #[error("label vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("requested {k} clusters from {n} points")]
    TooManyClusters { k: usize, n: usize },

    #[error("center set is empty")]
    NoCenters,
}
