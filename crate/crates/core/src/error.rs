use alloc::string::String;

/// Errors raised by the geometry and exact-arithmetic routines.
///
/// Precondition failures of the obstruction pipelines are *not* errors: they
/// are reported as [`crate::report::Verdict::PreconditionFailed`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("chord leaves the chart: {0}")]
    OutOfChart(String),
    #[error("no chord cycle at distance {0}")]
    EmptyCycle(f64),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("search bound exceeded: {0}")]
    SearchBound(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
