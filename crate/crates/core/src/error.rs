use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("photon count {requested} exceeds capacity {capacity}")]
    Capacity { requested: usize, capacity: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value {0} is not representable in exact mode")]
    NotRepresentable(String),

    #[error("did not converge after {steps} steps (residual {residual:e})")]
    NonConvergence { steps: usize, residual: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 1,
            Error::InvalidSpec(_) | Error::NotRepresentable(_) | Error::DimensionMismatch { .. } => 2,
            Error::NonConvergence { .. } => 3,
            Error::Capacity { .. } | Error::InvariantViolation(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
