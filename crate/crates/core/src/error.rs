use thiserror::Error;

/// Errors produced by the contract checks of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violated a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An element index fell outside the array range `[-M, M]`.
    #[error("element index {index} outside [-{half_count}, {half_count}]")]
    IndexOutOfRange { index: i64, half_count: i64 },

    /// A field evaluation was requested at zero propagation distance.
    #[error("propagation distance is zero: field singular at the source")]
    Singularity,

    /// A precoder was requested for a channel with no usable modes.
    #[error("channel has no positive singular values")]
    RankDeficient,
}

pub type Result<T> = std::result::Result<T, Error>;
