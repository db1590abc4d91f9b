use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation needed primes (or factor data) beyond the built table.
    #[error("sieve exhausted: need coverage up to {needed}, table stops at {have}")]
    SieveExhausted { needed: u64, have: u64 },

    /// A computation needed curve orders beyond the built table.
    #[error("curve order table exhausted: need primes up to {needed}, table stops at {have}")]
    OrderTableExhausted { needed: u64, have: u64 },

    /// A proven identity or bound failed; always indicates a bug, never bad input.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("config error: {0}")]
    Config(String),

    #[error("cache file rejected: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
