use alloc::string::String;

/// Errors raised by model construction, evaluation and estimation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("support of the first model is not contained in the support of the second: {0}")]
    SupportMismatch(String),

    #[error("quantile density vanishes at p = {0}")]
    DegenerateDensity(f64),

    #[error("integral diverges or failed to converge: {0}")]
    DivergentIntegral(String),

    #[error("bisection did not converge after {0} steps")]
    NoConvergence(usize),

    #[error("sample too small: need at least {needed}, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("zero spacing between order statistics {index} and {next} with alpha > 1; see the tie policy of `order_sample`", next = .index + 1)]
    ZeroSpacing { index: usize },
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Param(_) => "ParamError",
            Error::SupportMismatch(_) => "SupportMismatch",
            Error::DegenerateDensity(_) => "DegenerateDensity",
            Error::DivergentIntegral(_) => "DivergentIntegral",
            Error::NoConvergence(_) => "NoConvergence",
            Error::TooSmall { .. } => "TooSmall",
            Error::ZeroSpacing { .. } => "ZeroSpacing",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
