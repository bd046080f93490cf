use thiserror::Error;

use crate::numerics::{eigen::EigenError, interp::InterpError, ode::OdeError, tridiag::TridiagError};

#[derive(Debug, Error)]
pub enum FrontError {
    #[error("invalid reaction spec at {location}: {reason}")]
    InvalidSpec { location: String, reason: String },

    #[error("envelope error: {0}")]
    Envelope(String),

    #[error("eigen-solver iteration limit: {0}")]
    IterationLimit(#[from] EigenError),

    #[error("no positive decaying solution for lambda = {lambda} (lambda0 estimate {lambda0}): {detail}")]
    NoDecayingSolution {
        lambda: f64,
        lambda0: f64,
        detail: String,
    },

    /// Condition (λ ≤ 2a₋ − 2√(ν−1)/(√ν+√(ν−1))·a₊ with λ > λ₀) violated.
    #[error(
        "threshold condition violated: {detail} (lambda0 = {lambda0:.6}, nu = {nu:.6}, threshold rhs = {rhs:.6})"
    )]
    Threshold {
        detail: String,
        lambda0: f64,
        nu: f64,
        rhs: f64,
    },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("slab outside eigenfunction window: {0}")]
    Window(String),

    #[error("numerical blow-up: {0}")]
    Blowup(String),

    #[error("domain exhausted: {0}")]
    DomainExhausted(String),

    #[error("front absent: {0}")]
    FrontAbsent(String),

    #[error("transform domain: {0}")]
    TransformDomain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Ode(#[from] OdeError),

    #[error(transparent)]
    Interp(#[from] InterpError),

    #[error("internal linear solve failure: {0}")]
    Tridiag(#[from] TridiagError),
}

pub type Result<T, E = FrontError> = std::result::Result<T, E>;
