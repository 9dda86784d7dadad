use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation too small: discarded probability {tail:e} exceeds {epsilon:e}")]
    TruncationTooSmall { tail: f64, epsilon: f64 },

    #[error("step size underflow at tau = {tau} (h = {step:e})")]
    StepFailure { tau: f64, step: f64 },

    #[error("block (m = {m}, n = {n}) has a vanishing Rabi frequency")]
    DegenerateBlock { m: usize, n: usize },

    #[error("quadrature not converged: order-doubling difference {difference:e} exceeds {tolerance:e}")]
    QuadratureNotConverged { difference: f64, tolerance: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("element table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Whether the error originates from user input rather than from a solver.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Validation { .. } | Error::UnknownPreset(_)
        )
    }

    /// Stable machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::TruncationTooSmall { .. } => "TruncationTooSmall",
            Error::StepFailure { .. } => "StepFailure",
            Error::DegenerateBlock { .. } => "DegenerateBlock",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::Cache(_) => "CacheError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
