use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("speed {v} is not below the speed of light")]
    FasterThanLight { v: f64 },
    #[error("smearing width must be positive, got {sigma}")]
    InvalidSmearing { sigma: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("not a density matrix: {constraint}")]
    NotDensityMatrix { constraint: String },
    #[error("momentum must be non-zero")]
    ZeroMomentum,
    #[error("point at z = {z} is not on the detector side of the plate at d = {d}")]
    PointBeyondPlate { z: f64, d: f64 },
    #[error("worldline integration failed at tau = {tau} (step {step:e}, {steps} steps)")]
    IntegrationFailure { tau: f64, step: f64, steps: usize },
    #[error("tolerance not met: value {value:e}, error estimate {error_estimate:e} after {evaluations} evaluations")]
    ToleranceNotMet {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("pole {pole} lies outside ({a}, {b})")]
    PoleOutsideDomain { pole: f64, a: f64, b: f64 },
    #[error("resonance shell s* = {s_star} is not positive")]
    NonPositiveShell { s_star: f64 },
    #[error("forces carry different normalizations")]
    NormalizationMismatch,
    #[error("{function} is undefined at x = {x}")]
    DomainError { function: &'static str, x: f64 },
    #[error("no closed form for regime {0}")]
    UnknownRegime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
