use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse failure classification, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments or violated domain preconditions.
    Usage,
    /// Missing, unreadable, or malformed files.
    File,
    /// Internal consistency failure; indicates a bug, not bad input.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("series width must be positive, got {0}")]
    NonPositiveWidth(String),
    #[error("slice for grade {grade} has {got} coefficients, expected {expected}")]
    SliceLength {
        grade: usize,
        expected: usize,
        got: usize,
    },
    #[error("operands have different widths: {0} vs {1}")]
    WidthMismatch(String, String),
    #[error("the zero series has no grade")]
    ZeroSeries,
    #[error("series is not grade-homogeneous (grades {0:?})")]
    Inhomogeneous(Vec<usize>),
    #[error("evaluation point must satisfy Im z > 0, got Im z = {0}")]
    NotInUpperHalfPlane(f64),
    #[error("evaluation needs at least one term")]
    ZeroTruncation,
    #[error("summing {terms} terms exceeds the known precision N = {precision}")]
    TruncationTooLong { terms: usize, precision: usize },
    #[error("divisor sum is defined for n >= 1 only")]
    DivisorSumAtZero,
    #[error("no Eisenstein generator for weight {0}")]
    UnsupportedEisenstein(u32),
    #[error("unknown form selector `{0}`: not a builtin (E2, E4, E6, Delta) and not an @path")]
    UnknownForm(String),
    #[error("form weight must be a positive integer")]
    InvalidWeight,
    #[error("depth-0 form must be grade-homogeneous of grade 0, found grades {0:?}")]
    DepthZeroGrades(Vec<usize>),
    #[error("form `{name}` has depth {depth}, expected a depth-0 input")]
    NonzeroDepth { name: String, depth: u32 },
    #[error("weight mismatch: expected {expected}, got {got}")]
    WeightMismatch { expected: i64, got: i64 },
    #[error("weight {lambda} too small for degree bound {degree}: need weight >= {min}")]
    WeightRange { lambda: i64, min: i64, degree: usize },
    #[error("index {index} out of range 0..={max}")]
    IndexRange { index: i64, max: i64 },
    #[error("polynomial needs at least one coefficient")]
    EmptyPolynomial,
    #[error("matrix is not unimodular: det = {0}")]
    NotUnimodular(f64),
    #[error("cz + d vanishes at the evaluation point")]
    SingularTransform,
    #[error("series precision {got} too low, need at least {needed}")]
    PrecisionTooLow { needed: usize, got: usize },
    #[error("grading inconsistency in {context}: {detail}")]
    GradingInconsistency { context: String, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: field {field}: {reason}")]
    MalformedForm {
        path: String,
        field: String,
        reason: String,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::MalformedForm { .. } => ErrorClass::File,
            Error::GradingInconsistency { .. } => ErrorClass::Internal,
            _ => ErrorClass::Usage,
        }
    }

    pub(crate) fn grading(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::GradingInconsistency {
            context: context.into(),
            detail: detail.into(),
        }
    }
}
