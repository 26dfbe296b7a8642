use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    Asymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("invalid index pair: {0}")]
    InvalidIndices(String),

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("input does not define a spherical tetrahedron: {0}")]
    NotATetrahedron(String),

    #[error("principal cofactor {index} = {value:e} is degenerate")]
    DegenerateCofactor { index: usize, value: f64 },

    #[error("cosine {value} overshoots [-1, 1] by more than rounding allows")]
    CosineOvershoot { value: f64 },

    #[error("edge lengths are not Z2-symmetric within tolerance {tol:e}")]
    NotZ2 { tol: f64 },

    #[error("t^2 = {t_squared:e} is zero; real-part identity holds only as a limit")]
    TZero { t_squared: f64 },

    #[error("t^2 = {t_squared:e} is outside the regime of this formula")]
    WrongRegime { t_squared: f64 },

    #[error("angle pattern {pattern} contradicts t^2 = {t_squared:e}")]
    Unclassifiable { pattern: String, t_squared: f64 },

    #[error("no elementary volume condition holds")]
    NotElementary,

    #[error("elementary formulas disagree: {0:?}")]
    ElementaryMismatch(Vec<f64>),

    #[error("u must be non-zero")]
    NonPositiveU,

    #[error("series representation requires u >= 1, got {u}")]
    ULessThanOne { u: f64 },

    #[error("series did not converge after {terms} terms (last term {last:e})")]
    NonConvergence { terms: usize, last: f64 },

    #[error("case changed from {from} to {to} under perturbation")]
    CaseBoundary { from: String, to: String },

    #[error("integration path leaves the tetrahedron domain at parameter {parameter}")]
    PathLeavesDomain { parameter: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a
    /// numerical breakdown inside a valid computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::Asymmetric { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::InvalidIndices(_)
                | Error::OutOfRange { .. }
                | Error::NotATetrahedron(_)
                | Error::DegenerateCofactor { .. }
                | Error::NotZ2 { .. }
                | Error::NotElementary
                | Error::NonPositiveU
                | Error::ULessThanOne { .. }
                | Error::InvalidArgument(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite { .. } => "NonFinite",
            Error::Asymmetric { .. } => "Asymmetric",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::InvalidIndices(_) => "InvalidIndices",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NotATetrahedron(_) => "NotATetrahedron",
            Error::DegenerateCofactor { .. } => "DegenerateCofactor",
            Error::CosineOvershoot { .. } => "CosineOvershoot",
            Error::NotZ2 { .. } => "NotZ2",
            Error::TZero { .. } => "TZero",
            Error::WrongRegime { .. } => "WrongRegime",
            Error::Unclassifiable { .. } => "Unclassifiable",
            Error::NotElementary => "NotElementary",
            Error::ElementaryMismatch(_) => "ElementaryMismatch",
            Error::NonPositiveU => "NonPositiveU",
            Error::ULessThanOne { .. } => "ULessThanOne",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::CaseBoundary { .. } => "CaseBoundary",
            Error::PathLeavesDomain { .. } => "PathLeavesDomain",
            Error::Internal(_) => "Internal",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
