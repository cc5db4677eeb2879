use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vector length does not match the matrix width it is used with.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Matrices with different column counts cannot be stacked.
    #[error("column count mismatch: first part has {expected} columns, part {part} has {got}")]
    ColumnCountMismatch {
        part: usize,
        expected: usize,
        got: usize,
    },

    /// A geometry would contain more points than the configured ceiling.
    #[error("geometry has {points} points, exceeding the ceiling of {ceiling}")]
    PointCeilingExceeded { points: usize, ceiling: usize },

    /// Geometry parameters outside the supported range.
    #[error("unsupported geometry parameters: {0}")]
    BadGeometryParams(String),

    /// An all-zero row was found where only nonzero checks are meaningful.
    #[error("row {row} of part {part} is all-zero")]
    ZeroRow { part: usize, row: usize },

    /// Exhaustive candidate-set enumeration is limited to small lengths.
    #[error("candidate-set enumeration requires n <= {max}, got n = {n}")]
    EnumerationGuard { n: usize, max: usize },

    /// Target dimension outside 0..=n.
    #[error("target dimension {k_target} exceeds the code length {n}")]
    BadKTarget { k_target: usize, n: usize },

    /// A zero-dimensional code has no codeword to offset against.
    #[error("code has dimension 0; cannot draw a codeword")]
    ZeroDimensionalCode,

    /// Crossover probability outside [0, 0.5).
    #[error("crossover probability must lie in [0, 0.5), got {0}")]
    BadCrossoverProbability(f64),

    /// Helper data of the wrong variant passed to a reproduction routine.
    #[error("helper data variant mismatch: expected {expected}")]
    HelperVariantMismatch { expected: &'static str },

    /// The decoder did not reach a zero syndrome within the iteration budget.
    #[error("decoder did not converge after {iterations} iterations")]
    DecodeFailed { iterations: usize },

    /// Malformed hexadecimal vector encoding.
    #[error("bad hex vector: {0}")]
    BadHex(String),

    /// Malformed or inconsistent alist text.
    #[error("bad alist data: {0}")]
    BadAlist(String),

    /// Malformed or inconsistent JSON payload.
    #[error("bad report data: {0}")]
    BadReport(String),

    /// Underlying file-system failure.
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
