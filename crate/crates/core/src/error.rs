use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Each variant maps to a stable machine-readable code (see [`Error::code`])
/// which the CLI writes into its report documents.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has no terms")]
    EmptyPolynomial,
    #[error("expected a unit complex number, got modulus {0}")]
    NonUnitArgument(f64),
    #[error("polynomial is not strongly polar weighted homogeneous for the given weights")]
    NotHomogeneous,
    #[error("polynomial is not convenient (missing pure z1 or pure z2 monomial)")]
    NotConvenient,
    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("radial budget s = {s} is smaller than the number of negative orbits r = {r}")]
    RadialBudgetTooSmall { s: i64, r: i64 },
    #[error("invalid link configuration: {0}")]
    InvalidConfiguration(String),
    #[error("solver budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("map vanishes on the winding contour (min modulus {0:e})")]
    ZeroOnContour(f64),
    #[error("tangential or non-generic crossing: {0}")]
    TangentialCrossing(String),
    #[error("point is off the sphere of radius {radius} (norm {norm})")]
    NotOnSphere { radius: f64, norm: f64 },
    #[error("point is not on the variety (|f| = {0:e})")]
    NotOnVariety(f64),
    #[error("configuration has no negatively oriented orbit")]
    NoNegativeOrbit,
    #[error("isotopy blocked between orbits {0} and {1}")]
    IsotopyBlocked(usize, usize),
    #[error("base point lies on the link (|f| = {0:e})")]
    OnLink(f64),
    #[error("point coincides with the projection pole")]
    AtPole,
    #[error("curves are too close (min distance {0:e})")]
    CurvesTooClose(f64),
    #[error("no admissible projection pole found")]
    PoleSearchFailed,
    #[error("syntax error at offset {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("exponent {0} exceeds the limit")]
    ExponentOverflow(u64),
    #[error("nothing to render")]
    EmptyData,
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyPolynomial => "EmptyPolynomial",
            Error::NonUnitArgument(_) => "NonUnitArgument",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::NotConvenient => "NotConvenient",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::RadialBudgetTooSmall { .. } => "RadialBudgetTooSmall",
            Error::InvalidConfiguration(_) => "InvalidConfiguration",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::ZeroOnContour(_) => "ZeroOnContour",
            Error::TangentialCrossing(_) => "TangentialCrossing",
            Error::NotOnSphere { .. } => "NotOnSphere",
            Error::NotOnVariety(_) => "NotOnVariety",
            Error::NoNegativeOrbit => "NoNegativeOrbit",
            Error::IsotopyBlocked(..) => "IsotopyBlocked",
            Error::OnLink(_) => "OnLink",
            Error::AtPole => "AtPole",
            Error::CurvesTooClose(_) => "CurvesTooClose",
            Error::PoleSearchFailed => "PoleSearchFailed",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::ExponentOverflow(_) => "ExponentOverflow",
            Error::EmptyData => "EmptyData",
            Error::Io(_) => "Io",
        }
    }

    /// Input/usage problems as opposed to numerical failures.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::SyntaxError { .. }
                | Error::ExponentOverflow(_)
                | Error::Io(_)
                | Error::InvalidConfiguration(_)
                | Error::EmptyData
        )
    }
}
