use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("non-positive density {rho} in cell {cell}")]
    NonPositiveDensity { cell: usize, rho: f64 },
    #[error("grid function length {len} too short (need at least {need})")]
    TooShort { len: usize, need: usize },
    #[error("alignment mismatch: expected {expected}, got {got}")]
    Alignment { expected: &'static str, got: &'static str },
    #[error("time window is missing the {0} layer")]
    MissingLayer(&'static str),
    #[error("unsupported equation of state: {0}")]
    UnsupportedEos(String),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error("singular linear system at row {0}")]
    Singular(usize),
    #[error("law {law} is not defined for scheme {scheme}")]
    LawMismatch { law: String, scheme: String },
    #[error("step {step} failed")]
    StepFailed { step: usize, source: Box<Error> },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
