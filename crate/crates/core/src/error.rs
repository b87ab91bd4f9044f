use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix at t={t} is not Hermitian: ||A - A^H||_F = {asymmetry:e}")]
    NonHermitian { t: f64, asymmetry: f64 },

    #[error("sample grid is empty")]
    EmptyGrid,

    #[error("sample times are not strictly increasing at index {index}")]
    NonMonotoneSamples { index: usize },

    #[error("invalid family description: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver failed at t={t} (||A||_F = {norm:e})")]
    EigenFailure { t: f64, norm: f64 },

    #[error("level {level} lies on the spectrum at t={t} (eigenvalue {eigenvalue:e})")]
    LevelOnSpectrum { t: f64, level: f64, eigenvalue: f64 },

    #[error("no flow partition found on [{start}, {end}]: {reason}")]
    PartitionFailure { start: f64, end: f64, reason: String },

    #[error("unitary input at t={t} has defect {defect:e}")]
    NonUnitaryInput { t: f64, defect: f64 },

    #[error("refinement cap of {steps} steps exceeded (last difference {last_difference:e})")]
    MaxRefinementExceeded { steps: usize, last_difference: f64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("input is not an orthogonal projection (defect {defect:e})")]
    NonProjectionInput { defect: f64 },

    #[error("ramp violates its constraints: {0}")]
    RampViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
