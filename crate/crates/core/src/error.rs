use thiserror::Error;

/// Errors raised while validating inputs or reading data files.
///
/// Sample and matrix indices are 0-based. File positions are 1-based line
/// numbers, as an editor would show them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),

    #[error("sampling interval must be a positive number of minutes")]
    InvalidInterval,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("cost matrix is not square: {rows} rows, row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },

    #[error("cost matrix entry ({0}, {1}) is not finite")]
    NonFiniteEntry(usize, usize),

    #[error("cost matrix entry ({0}, {1}) is negative")]
    NegativeEntry(usize, usize),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("need at least two complete days of {samples_per_day} samples, got {len} samples")]
    TooShort { len: usize, samples_per_day: usize },

    #[error("k = {k} exceeds the {available} available training patterns")]
    KTooLarge { k: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {0}: timestamp breaks the constant sampling interval")]
    IrregularInterval(usize),

    #[error("line {0}: non-finite sample")]
    NonFiniteSampleAt(usize),

    #[error("line {0}: row width differs from the first row")]
    RaggedRows(usize),

    #[error("line {0}: missing label")]
    MissingLabel(usize),

    #[error("file contains no data rows")]
    EmptyFile,

    #[error("no series named {0:?}")]
    UnknownSeries(String),

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
