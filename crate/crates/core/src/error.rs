use thiserror::Error;

/// Everything that can go wrong while building or evolving Gaussian states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a Gaussian state needs at least one mode")]
    NoModes,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("negative variance {value} for {what}")]
    NegativeVariance { what: &'static str, value: f64 },
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error("beamsplitter needs two distinct modes, got {0} twice")]
    SameMode(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("covariance is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),
    #[error("covariance violates the uncertainty relation (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),
    #[error("expected a single-mode state, got {0} modes")]
    NotSingleMode(usize),
    #[error("invalid measurement plan: {0}")]
    InvalidPlan(String),
    #[error("measurement angle {0} rad is degenerate; it must lie strictly inside (0, pi/2)")]
    DegenerateAngle(f64),
    #[error("squeezing parameter must be non-negative, got {0}")]
    NegativeSqueezing(f64),
    #[error("noise power needs a positive variance, got {0}")]
    NonPositiveVariance(f64),
    #[error("fidelity undefined: {0}")]
    Fidelity(&'static str),
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
