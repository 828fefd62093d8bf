use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// The variants split into two families: input problems (domain, range,
/// configuration, preconditions) and numerical failures. [`Error::is_numerical`]
/// tells them apart, which is what the command line uses for its exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("kernel constants are uncalibrated")]
    Uncalibrated,
    #[error("empty report: {0}")]
    EmptyReport(String),
    #[error("no blowup bracket: {0}")]
    Bracket(String),
    #[error("iteration diverged; last finite iterate k = {last_finite}")]
    IterationDiverged { last_finite: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the computation itself rather than of its inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::IterationDiverged { .. } | Error::Bracket(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
