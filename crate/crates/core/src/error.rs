use thiserror::Error;

/// Errors raised by the domain types and operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid post-processing: {0}")]
    InvalidPostProcessing(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid mixing weights: {0}")]
    InvalidWeights(String),

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("not realizable as a unital qubit channel: {0}")]
    NotRealizable(String),

    #[error("direction has weight on a degenerate axis; only the trivial solution s = 0 exists")]
    DegenerateDirection,

    #[error("unsupported basis point n'_1 = {0} (eigenbasis undefined at n'_1 = ±1)")]
    UnsupportedBasisPoint(f64),
}

impl Error {
    /// Short stable identifier, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "not_hermitian",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidObservable(_) => "invalid_observable",
            Error::InvalidPostProcessing(_) => "invalid_post_processing",
            Error::InvalidChannel(_) => "invalid_channel",
            Error::ParameterOutOfRange(_) => "parameter_out_of_range",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::NotCompletelyPositive { .. } => "not_completely_positive",
            Error::NotRealizable(_) => "not_realizable",
            Error::DegenerateDirection => "degenerate_direction",
            Error::UnsupportedBasisPoint(_) => "unsupported_basis_point",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
