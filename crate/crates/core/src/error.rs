use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GgError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point lies outside the model domain: {0}")]
    OutsideDomain(String),
    #[error("lift step too large: consecutive samples skip a domain copy")]
    StepTooLarge,
    #[error("integration step underflow at t = {t} (step {step:e})")]
    StepUnderflow { t: f64, step: f64 },
    #[error("point collision during isotopy")]
    Collision,
    #[error("degenerate projection: {0}")]
    Degenerate(String),
    #[error("support violation: {0}")]
    Support(String),
    #[error("no chart assignment: {0}")]
    NoChart(String),
    #[error("segment lacks Hamiltonian data: {0}")]
    NotHamiltonian(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("rejection ceiling exceeded: {rejected} rejected of {samples} samples")]
    Rejection { rejected: u64, samples: u64 },
    #[error("resampling budget exhausted after {0} attempts")]
    RetryBudget(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, GgError>;

impl From<std::io::Error> for GgError {
    fn from(e: std::io::Error) -> Self {
        GgError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for GgError {
    fn from(e: serde_json::Error) -> Self {
        GgError::Parse(e.to_string())
    }
}
