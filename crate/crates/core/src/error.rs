use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid multigraph: {0}")]
    InvalidMultigraph(String),

    #[error("schedule is not in G(PD)_2: {0}")]
    NotPd2(String),

    #[error("target diameter must be at least 2, got {0}")]
    DiameterTooSmall(usize),

    #[error("horizon too short: flood from node {node} starting at round {round} never completes")]
    HorizonTooShort { node: usize, round: usize },

    #[error("horizon {horizon} exceeds schedule length {len}")]
    HorizonExceedsSchedule { horizon: usize, len: usize },

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("adversary produced a round outside the declared family at round {round}: {reason}")]
    AdversaryViolation { round: usize, reason: String },

    #[error("protocol error at round {round}: {reason}")]
    Protocol { round: usize, reason: String },

    #[error("history depth mismatch: expected {expected}, found {found}")]
    DepthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-integral particular solution: {0}")]
    NonIntegral(String),

    #[error("count vector has zero population")]
    ZeroPopulation,

    #[error("enumeration of {cells} cells exceeds the guard of {limit} (set ANONDYN_MAX_CELLS to override)")]
    ResourceGuard { cells: u128, limit: u128 },

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
