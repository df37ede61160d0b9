use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("pumping rate r = {r} is not below threshold (linearized theory requires r < 1)")]
    AboveThreshold { r: f64 },

    #[error("coupling matrix has no eigenvalue of nonzero magnitude")]
    ZeroCoupling,

    #[error("window mismatch: expected {expected} modes, got {found}")]
    WindowMismatch { expected: usize, found: usize },

    #[error("pump spectrum has no support on the index range -{reach}..={reach} reached by the window")]
    NoPumpOverlap { reach: i64 },

    #[error("eigensolver failed to converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("linear system is singular or unstable: {0}")]
    Unstable(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
