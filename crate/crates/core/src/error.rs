use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pgm: {0}")]
    Pgm(String),

    #[error("pgm payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("frame dimensions {width}x{height} are not multiples of 8")]
    BadDimensions { width: usize, height: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("sequence has no frames")]
    EmptySequence,

    #[error("synthetic displacement ({dx}, {dy}) exceeds the 16 pixel limit")]
    DisplacementOutOfRange { dx: i32, dy: i32 },

    #[error("watermark must be two-level 0/255, found intensity {0}")]
    NotBinary(u8),

    #[error("watermark needs {needed} carrier pairs but the frame holds {available}")]
    CapacityExceeded { needed: usize, available: usize },

    #[error("motion vector ({dx}, {dy}) of block ({row}, {col}) points outside the frame")]
    VectorOutOfBounds {
        row: usize,
        col: usize,
        dx: i32,
        dy: i32,
    },

    #[error("block shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("correlation undefined: input has zero variance")]
    UndefinedCorrelation,

    #[error("s2f {field}: {reason}")]
    Container { field: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn container(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Container {
            field,
            reason: reason.into(),
        }
    }
}
