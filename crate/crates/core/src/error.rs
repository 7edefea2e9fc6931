use thiserror::Error;

/// Errors raised by the numerical routines and the experiment runner.
#[derive(Debug, Error)]
pub enum TsmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("point {point:?} lies outside the sampled grid")]
    OutOfDomain { point: Vec<f64> },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("quadrature check failed: {0}")]
    Quadrature(String),

    #[error("decay condition violated: {0}")]
    Decay(String),

    #[error("ill-conditioned fit (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("row {row} (center {center}, radius index {radius}): {source}")]
    Row {
        row: usize,
        center: usize,
        radius: usize,
        #[source]
        source: Box<TsmError>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = TsmError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> TsmError {
    TsmError::InvalidArgument(msg.into())
}
