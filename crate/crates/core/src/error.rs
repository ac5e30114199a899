use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    Size(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("brute force refused for n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
