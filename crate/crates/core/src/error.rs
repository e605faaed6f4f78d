use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the solver pipeline. The `Display` text is prefixed with
/// the module that produced it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("covering: insufficient nodes (requested {requested}, have {available})")]
    InsufficientNodes { requested: usize, available: usize },

    #[error("covering: degenerate neighborhood around node {anchor}")]
    DegenerateNeighborhood { anchor: usize },

    #[error("local-poly: degenerate subset {subset}")]
    DegenerateSubset { subset: usize },

    #[error("timestepper: time-step matrix singular (condition estimate {condition:e})")]
    SingularStepMatrix { condition: f64 },

    #[error("fd-reference: reference diverged at step {step}")]
    ReferenceDiverged { step: usize },

    #[error("fd-reference: time {t} is not on the stored time grid")]
    TimeNotStored { t: f64 },

    #[error("rbf-baseline: RBF system ill-conditioned (condition estimate {condition:e})")]
    RbfIllConditioned { condition: f64 },

    #[error("experiment: mismatched time grids: {0}")]
    TimeGridMismatch(String),

    #[error("{module}: invalid parameter: {message}")]
    InvalidParameter {
        module: &'static str,
        message: String,
    },

    #[error("experiment: config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            module,
            message: message.into(),
        }
    }
}
