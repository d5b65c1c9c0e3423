//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by spectrum construction, channel models and bound evaluators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input (generator matrix, codebook, channel description, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The requested object is too large to enumerate exhaustively.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// A quadrature integrand evaluated to a non-finite value.
    #[error("non-finite integrand at node {node} (x = {x})")]
    NonFinite { node: usize, x: f64 },

    /// Scalar minimization could not find any finite objective value.
    #[error("optimization failed: {0}")]
    Optimization(String),

    /// Root finding could not bracket a sign change.
    #[error("no root in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    /// A spectrum ratio was requested against a reference that vanishes where the spectrum does not.
    #[error("reference spectrum vanishes at weight {0} where the spectrum is positive")]
    Ratio(usize),

    /// Failure while parsing a serialized spectrum.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
