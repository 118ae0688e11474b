use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domains overlap: {0} appears in both permutations")]
    DomainOverlap(u32),
    #[error("not a shuffle: {0}")]
    NotAShuffle(String),
    #[error("infeasible profile: {0}")]
    InfeasibleProfile(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
