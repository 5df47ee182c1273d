use thiserror::Error;

/// Errors raised by the library.
///
/// Variants are grouped by how a caller is expected to react: domain errors
/// (bad point, pole, degenerate input) are the caller's fault; calibration and
/// collision errors flag a numerical bug; `SimulationAborted` is a runtime abort.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension m={m} too small for root system of type {kind}")]
    DimensionTooSmall { kind: char, m: usize },

    #[error("Weyl group enumeration guard exceeded: m={m} > {max}")]
    EnumerationGuard { m: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {0:?} is not in the open Weyl chamber")]
    NotInChamber(Vec<f64>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole in rising factorial: {0}")]
    Pole(String),

    #[error("partition weights differ: {0} vs {1}")]
    WeightMismatch(u32, u32),

    #[error("eigenvalue collision between {tau} and {mu}")]
    EigenvalueCollision { tau: String, mu: String },

    #[error("coordinates too close: gap {gap:e} below tolerance {tol:e}")]
    Degenerate { gap: f64, tol: f64 },

    #[error("singular drift at {0:?}")]
    SingularDrift(Vec<f64>),

    #[error("calibration spread {spread:e} exceeds bound {bound:e}")]
    CalibrationSpread { spread: f64, bound: f64 },

    #[error("normalization constant spread {spread:e} exceeds bound {bound:e}")]
    NormalizationSpread { spread: f64, bound: f64 },

    #[error("Jack table has weight {have}, {need} required")]
    TableTooShort { have: u32, need: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("simulation aborted: {0}")]
    SimulationAborted(String),

    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    /// True for errors caused by the input point or parameters rather than by
    /// the implementation.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::DimensionTooSmall { .. }
                | Error::EnumerationGuard { .. }
                | Error::DimensionMismatch { .. }
                | Error::NotInChamber(_)
                | Error::Domain(_)
                | Error::Pole(_)
                | Error::WeightMismatch(..)
                | Error::Degenerate { .. }
                | Error::SingularDrift(_)
                | Error::InvalidInput(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
