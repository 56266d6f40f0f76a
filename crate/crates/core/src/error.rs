use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unstable signature (g={g}, n={n}): need 2g-2+n > 0")]
    Unstable { g: u32, n: usize },

    #[error("dimension mismatch: sum of indices is {got}, expected {expected}")]
    DimensionMismatch { got: u64, expected: i64 },

    #[error("values live in different pi-grades ({0} vs {1})")]
    GradeMismatch(u32, u32),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
