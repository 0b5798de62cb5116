use std::path::PathBuf;

use thiserror::Error;

/// Failures while decoding a netpbm byte stream.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PnmError {
    #[error("bad magic number {0:?}, expected P2, P3, P5 or P6")]
    BadMagic(String),
    #[error("malformed header token {0:?}")]
    BadHeader(String),
    #[error("invalid dimension {0}, width and height must be positive")]
    BadDimension(i64),
    #[error("unsupported maxval {0}, only 255 is supported")]
    UnsupportedMaxval(i64),
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample value {0} exceeds maxval 255")]
    SampleOutOfRange(i64),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pnm(#[from] PnmError),

    #[error("invalid image dimensions {width}x{height} for {len} samples")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("channel value {0} outside [0, 255]")]
    ChannelOutOfRange(f64),

    #[error("intensity {value} at index {index} is not quantized to an integer in [0, 255]")]
    NotQuantized { index: usize, value: f64 },

    #[error("noise level {0} outside [0, 1]")]
    InvalidNoiseLevel(f64),

    #[error("kernel must have odd width and height, got {width}x{height}")]
    EvenKernel { width: usize, height: usize },

    #[error("window size {0} must be odd and at least 3")]
    InvalidWindow(usize),

    #[error("enhancement exponent must be positive, got {0}")]
    InvalidExponent(f64),

    #[error("invalid structuring element: {0}")]
    InvalidStructuringElement(&'static str),

    #[error("threshold must be non-negative, got {0}")]
    NegativeThreshold(f64),

    #[error("ground-truth edge map is empty")]
    EmptyTruth,

    #[error("unsupported glyph {0:?}")]
    UnsupportedGlyph(char),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("cannot write an empty report")]
    EmptyReport,

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
