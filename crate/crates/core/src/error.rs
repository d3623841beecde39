use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The input does not describe a valid structure (bad degrees, d² ≠ 0, ...).
    #[error("invalid structure: {0}")]
    Structure(String),
    /// A construction produced data that failed an internal identity check.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
