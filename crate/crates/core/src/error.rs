use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query fell outside the range covered by a table.
    #[error("range error: {0}")]
    Range(String),

    /// A file could not be parsed; carries the 1-based line number.
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// A validation invariant failed (strict mode).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A quadrature or series did not converge within budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A computation exceeded its memory or enumeration budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
