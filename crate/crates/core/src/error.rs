use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the dense cap of {cap}")]
    Capacity { n: u32, cap: u32 },

    #[error("table length {len} does not match 2^{n}")]
    Length { n: u32, len: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("expected {expected} normalization")]
    Normalization { expected: &'static str },

    #[error("indicator of the empty set has no tilde normalization")]
    EmptySet,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("player {player} sent {bits} bits, budget is {budget}")]
    Budget { player: usize, bits: usize, budget: usize },

    #[error("labels contradict on a cycle through edge ({0}, {1})")]
    Contradiction(u32, u32),

    #[error("distribution not normalized: total mass {0}")]
    NotNormalized(f64),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
