use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid quantity: {0}")]
    Quantity(String),

    #[error("malformed selection: site id {id} does not exist (instance has {num_sites} sites)")]
    UnknownSite { id: usize, num_sites: usize },

    #[error("undefined ratio: total demand is zero")]
    UndefinedRatio,

    #[error("invalid decision: {0}")]
    InvalidDecision(String),

    #[error("{metric} has no approximation guarantee under greedy selection; use exhaustive")]
    NoApproximationGuarantee { metric: &'static str },

    #[error("enumeration of {count} candidates exceeds the cap of {cap}; use greedy instead")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
