use thiserror::Error;

/// Errors reported by state construction, evolution and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("photon numbers ({n_a}, {n_b}) exceed the cutoff n_max = {n_max}")]
    IndexOutOfCutoff {
        n_a: usize,
        n_b: usize,
        n_max: usize,
    },

    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,

    #[error("cutoff n_max = {n_max} too small: truncation tail {tail:.3e} exceeds tolerance {tolerance:.3e}")]
    CutoffTooSmall {
        n_max: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("no cutoff up to the cap {cap} meets tail tolerance {tolerance:.3e} (tail at cap {tail:.3e})")]
    CutoffCapExceeded {
        cap: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error(
        "quadrature amplitude {amplitude:.3e} on the contour of radius {radius} is below the floor"
    )]
    AmplitudeTooSmall { radius: f64, amplitude: f64 },

    #[error("matrix dimension {dim} exceeds the configured cap {cap}")]
    MemoryBudgetExceeded { dim: usize, cap: usize },

    #[error("schmidt and eigensolve negativities disagree: {schmidt} vs {eigensolve}")]
    MethodDisagreement { schmidt: f64, eigensolve: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
