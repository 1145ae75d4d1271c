use thiserror::Error;

/// Errors produced by the statistics, overlap, risk, simulation and screening routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Both groups have zero dispersion, so a standardized difference is undefined.
    #[error("degenerate variance: both groups have zero dispersion")]
    DegenerateVariance,

    /// The location difference in a denominator is exactly zero.
    #[error("division by zero: group locations are equal")]
    DivisionByZero,

    /// Group means tie, so the positive direction cannot be determined.
    #[error("direction undefined: group means are equal")]
    DirectionUndefined,

    #[error(
        "logistic fit did not converge after {iterations} iterations (gradient norm {grad_norm:e})"
    )]
    FitError { iterations: usize, grad_norm: f64 },

    #[error("format error: {0}")]
    FormatError(String),

    #[error("parse error on line {line}: {message}")]
    ParseError { line: u64, message: String },

    #[error("duplicate well at row {row}, col {col} on plate {plate} (line {line})")]
    DuplicateWell {
        plate: String,
        row: u32,
        col: u32,
        line: u64,
    },

    #[error("plate {plate} has {positive} positive and {negative} negative controls; at least 2 of each are required")]
    InsufficientControls {
        plate: String,
        positive: usize,
        negative: usize,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl serde::Serialize for Error {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
