use thiserror::Error;

use crate::cascade::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A grid set that cannot be turned into a cascade. `grid` is 1-based,
    /// `index` is the 0-based position of the offending value.
    #[error("grid {grid} rejected at index {index}: {reason}")]
    BuildRejected {
        grid: usize,
        index: usize,
        reason: String,
    },

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("snapshot decode failed: {0}")]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("bad magic (expected FCG1)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated: needed {needed} more bytes at offset {offset}")]
    Truncated { offset: usize, needed: usize },
    #[error("{0} trailing bytes after last level")]
    TrailingBytes(usize),
    #[error("field out of range at offset {offset}: {what}")]
    OutOfRange { offset: usize, what: String },
    #[error("{} structural violation(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

pub(crate) fn check_key(key: f64) -> Result<()> {
    if key.is_nan() {
        return Err(Error::InvalidArgument("query key is NaN".into()));
    }
    Ok(())
}
