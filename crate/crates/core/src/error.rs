use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsmError {
    #[error("degenerate parameters: omega - alpha - beta = 0")]
    DegenerateParameters,
    #[error("parameters outside the inverted-oscillator region: {0}")]
    OutOfScope(String),
    #[error("degree {n} exceeds the supported maximum {max}")]
    DegreeTooLarge { n: usize, max: usize },
    #[error("outside the accuracy envelope: {0}")]
    OutOfAccuracyEnvelope(String),
    #[error("series did not converge: {0}")]
    SeriesNonConvergent(String),
    #[error("quadrature tolerance not reached (estimate {estimate:e}, target {target:e})")]
    ToleranceNotReached { estimate: f64, target: f64 },
    #[error("time must be positive, got {0}")]
    TimeNonPositive(f64),
    #[error("truncation insufficient: tail {tail:e} above bound {bound:e}")]
    TruncationInsufficient { tail: f64, bound: f64 },
    #[error("overflow guard: {0}")]
    OverflowGuard(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CsmError>;
