use thiserror::Error;

/// Errors raised by the arithmetic, dynamics and tree layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// The stored window of a series cannot certify the requested answer.
    /// `required_floor`, when known, is a floor deep enough to answer it.
    #[error("insufficient precision: {context}")]
    InsufficientPrecision {
        context: String,
        required_floor: Option<i64>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero input")]
    ZeroInput,

    #[error("depth exceeded: requested {requested}, available {available}")]
    DepthExceeded { requested: usize, available: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no root certificate: {0}")]
    NoRootCertificate(String),

    #[error("branch enumeration exceeded budget of {budget} pieces")]
    DepthInfeasible { budget: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid field: {0}")]
    InvalidField(String),
}

impl Error {
    pub(crate) fn precision(context: impl Into<String>) -> Self {
        Error::InsufficientPrecision {
            context: context.into(),
            required_floor: None,
        }
    }

    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::Domain(_) => "DomainError",
            Error::ZeroInput => "ZeroInput",
            Error::DepthExceeded { .. } => "DepthExceeded",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::NoRootCertificate(_) => "NoRootCertificate",
            Error::DepthInfeasible { .. } => "DepthInfeasible",
            Error::Parse(_) => "ParseError",
            Error::InvalidField(_) => "InvalidField",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
