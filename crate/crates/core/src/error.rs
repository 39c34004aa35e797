use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameter regime: {0}")]
    ParameterRegime(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("oracle refused: {0}")]
    OracleBound(String),

    #[error("eigensolver did not converge after {iterations} iterations (subspace residual {residual:.3e}, tolerance {tolerance:.1e})")]
    EigenNonConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
