use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension {dimension} exceeds the dense-matrix cap of {cap}")]
    SizeLimit { dimension: usize, cap: usize },

    /// A stateful model was driven outside its contract (step budget,
    /// stale or incomplete window).
    #[error("state error: {0}")]
    State(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A partial sum served by a PSU disagreed with the oracle value.
    #[error(
        "partial sum S({sum_index},{stage}) mismatch: oracle {expected}, unit returned {actual}"
    )]
    PartialSumMismatch {
        sum_index: usize,
        stage: u32,
        expected: u8,
        actual: u8,
    },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
