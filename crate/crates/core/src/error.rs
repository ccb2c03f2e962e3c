use thiserror::Error;

/// Domain errors raised by the library. Assertion-style failures inside the
/// algorithms surface as [`Error::Internal`] rather than panics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cone {0} is not a member of the fan")]
    NotMember(String),
    #[error("cone {0} is not smooth")]
    NotSmooth(String),
    #[error("stack is not stable: {0}")]
    NotStable(String),
    #[error("centers overlap: {0}")]
    OverlappingCenters(String),
    #[error("unsupported center: {0}")]
    UnsupportedCenter(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("polynomial is not homogeneous for the weights: {0}")]
    Inhomogeneous(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("initial forms fail the codimension check: {0}")]
    CodimensionGuard(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant, for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Invalid(_) => "invalid",
            Error::NotMember(_) => "not_member",
            Error::NotSmooth(_) => "not_smooth",
            Error::NotStable(_) => "not_stable",
            Error::OverlappingCenters(_) => "overlapping_centers",
            Error::UnsupportedCenter(_) => "unsupported_center",
            Error::SizeLimit(_) => "size_limit",
            Error::Inhomogeneous(_) => "inhomogeneous",
            Error::Parse(_) => "parse",
            Error::CodimensionGuard(_) => "codimension_guard",
            Error::Inconclusive(_) => "inconclusive",
            Error::Unsupported(_) => "unsupported",
            Error::Internal(_) => "internal",
        }
    }
}
