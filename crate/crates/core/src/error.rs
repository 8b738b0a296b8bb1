use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty operator")]
    EmptyOperator,

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive-definite (min eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate PF vector; supply jitter")]
    DegeneratePerron,

    #[error("ε = 1 trivially; graph disconnected")]
    Disconnected,

    #[error("oracle undefined; use solver")]
    OracleUndefined,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
