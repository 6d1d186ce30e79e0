use thiserror::Error;

/// Errors raised anywhere in the verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision of {requested} bits is below the minimum of {minimum} bits")]
    PrecisionTooLow { requested: usize, minimum: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("base q must satisfy 0 < q < 1")]
    InvalidBase,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A vanishing denominator inside a finite sum or product.
    #[error("pole in {factor} at index {index}")]
    Pole { factor: String, index: usize },

    #[error("missing parameter `{0}`")]
    MissingParameter(String),

    #[error("balancing condition violated: {0}")]
    BalanceViolation(String),

    #[error("factor of an infinite product vanishes at index {index}")]
    VanishingFactor { index: usize },

    #[error("no convergence after {terms} terms: {reason}")]
    NoConvergence { terms: usize, reason: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown limit pair `{0}`")]
    UnknownPair(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("cannot parse number `{0}`")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
