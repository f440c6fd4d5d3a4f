use std::io;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported Sobol dimension {dim} (at most {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("degenerate integration box: half-width {half_width} in coordinate {coord}")]
    DegenerateBox { coord: usize, half_width: f64 },

    #[error("quadrature oracle supports at most {max} time slices, got {slices}")]
    DimensionTooLarge { slices: usize, max: usize },

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: timestamp {timestamp} does not follow {previous}")]
    NonMonotonic { line: usize, timestamp: i64, previous: i64 },

    #[error("empty input")]
    EmptyInput,

    #[error("all {0} samples fall outside the histogram range")]
    AllOutOfRange(usize),

    #[error("model grid [{grid_lo}, {grid_hi}] does not cover histogram range [{hist_lo}, {hist_hi}]")]
    Coverage {
        grid_lo: f64,
        grid_hi: f64,
        hist_lo: f64,
        hist_hi: f64,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Coarse error classes, used by the command line front-end to pick an exit
/// code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numeric,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_)
            | Error::Parse { .. }
            | Error::NonMonotonic { .. }
            | Error::EmptyInput
            | Error::UnsupportedDimension { .. }
            | Error::DimensionTooLarge { .. }
            | Error::GridMismatch(_)
            | Error::Coverage { .. } => ErrorKind::Config,
            Error::DimensionMismatch { .. }
            | Error::DegenerateBox { .. }
            | Error::AllOutOfRange(_)
            | Error::Numeric(_) => ErrorKind::Numeric,
            Error::Io(_) => ErrorKind::Io,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
