use swanson_csm::CsmError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid region: {0}")]
    Region(String),
    #[error("{0}")]
    Usage(String),
    #[error("tolerance failure: {0}")]
    Tolerance(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Region(_) | CliError::Usage(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<CsmError> for CliError {
    fn from(e: CsmError) -> Self {
        let msg = e.to_string();
        match e {
            CsmError::OutOfScope(_) | CsmError::DegenerateParameters => CliError::Region(msg),
            CsmError::InvalidInput(_) | CsmError::TimeNonPositive(_) | CsmError::DegreeTooLarge { .. } => CliError::Usage(msg),
            CsmError::ToleranceNotReached { .. }
            | CsmError::TruncationInsufficient { .. }
            | CsmError::SeriesNonConvergent(_)
            | CsmError::OutOfAccuracyEnvelope(_)
            | CsmError::OverflowGuard(_) => CliError::Tolerance(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
