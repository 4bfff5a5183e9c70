//! Crate-wide error type and exit-code mapping.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller violated an operation precondition (dimension mismatch,
    /// undersized input, malformed action, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An evaluator produced a non-finite objective or constraint value.
    #[error("numerical domain error in problem `{problem}`: {detail}")]
    NumericalDomain { problem: String, detail: String },

    /// The requested operation is not available for this problem.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Agent training produced a non-finite loss or gradient.
    #[error("numerical divergence: {0}")]
    Divergence(String),

    /// A checkpoint stream is truncated, corrupt, or shape-inconsistent.
    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    /// Invalid run/batch configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 runtime/numerical, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}
