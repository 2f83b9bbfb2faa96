use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric-domain error: {0}")]
    NumericDomain(String),

    #[error("block index {j} outside resolved range [{min}, {max}]")]
    Range { j: i32, min: i32, max: i32 },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("solver abort at t = {time}: {reason}")]
    SolverAbort {
        time: f64,
        mode: Option<usize>,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
