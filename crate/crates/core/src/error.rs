use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpectileError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("sample is empty")]
    EmptySample,
    #[error("sample entry {index} is not finite ({value})")]
    NonFiniteDatum { index: usize, value: f64 },
    #[error("invalid distribution parameters: {0}")]
    InvalidDistribution(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("starting point must be finite, got {0}")]
    InvalidStart(f64),
    #[error("oracle cannot supply second partial moments")]
    UnsupportedOracle,
    #[error("method {0} requires an empirical distribution")]
    UnsupportedMethod(&'static str),
    #[error("alpha = {0} is on the wrong side of 1/2 for this solver; reflect first")]
    AlphaBranchMismatch(f64),
    #[error("no sign change of the first-order residual found after {0} bracket doublings")]
    BracketingFailed(usize),
}

pub type Result<T> = std::result::Result<T, ExpectileError>;
