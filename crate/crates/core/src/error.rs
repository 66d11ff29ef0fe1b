use thiserror::Error;

/// Errors raised by the exact-arithmetic engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} exceeds the configured cap of {limit} (got {value})")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        value: u64,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("fields not in a tower: {0}")]
    NotInTower(String),
    #[error("not a subfield: {0}")]
    NotSubfield(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("degenerate generator: {0}")]
    Degenerate(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap(what: &'static str, limit: u64, value: u64) -> Result<()> {
    if value > limit {
        Err(Error::CapExceeded { what, limit, value })
    } else {
        Ok(())
    }
}
