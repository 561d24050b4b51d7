use thiserror::Error;

/// Errors raised by model validation and the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transition row {row} sums to {sum}, expected 1")]
    NonStochasticRow { row: usize, sum: f64 },

    #[error("negative probability {value} at ({row}, {col})")]
    NegativeProbability { row: usize, col: usize, value: f64 },

    #[error("discount factor {0} outside (0, 1)")]
    GammaOutOfRange(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{count} deterministic policies exceed the enumeration cap of {cap}")]
    PolicySpaceTooLarge { count: u128, cap: usize },

    #[error("singular linear system (scaled pivot {pivot:e} in column {column})")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("transition chain is not primitive; stationary distribution is not unique")]
    NotPrimitive,

    #[error("closed form denominator {0:e} is numerically zero")]
    DegenerateDenominator(f64),
}

impl Error {
    /// True for failures of a numerical kernel, false for rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem { .. }
                | Error::NoConvergence { .. }
                | Error::NotPrimitive
                | Error::DegenerateDenominator(_)
        )
    }

    /// Name of the violated invariant or failed kernel.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonStochasticRow { .. } => "NonStochasticRow",
            Error::NegativeProbability { .. } => "NegativeProbability",
            Error::GammaOutOfRange(_) => "GammaOutOfRange",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::PolicySpaceTooLarge { .. } => "PolicySpaceTooLarge",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotPrimitive => "NotPrimitive",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
