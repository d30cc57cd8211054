use thiserror::Error;

/// Errors raised across the crate. Variants carry enough context to be
/// reported verbatim by the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("ill-conditioned interpolation (condition estimate {estimate:.3e} > {limit:.3e}); retry with the exact backend")]
    Conditioning { estimate: f64, limit: f64 },

    #[error("invalid Blaschke-Potapov data: {0}")]
    InvalidFactor(String),

    #[error("composition is ill-posed: {0}")]
    IllPosedComposition(String),

    #[error("pole at distance {distance:.3e} from the unit circle (at {pole_re:.6}{pole_im:+.6}i)")]
    BoundaryPole { pole_re: f64, pole_im: f64, distance: f64 },

    #[error("eigenvalue branches ambiguous in theta window [{theta_lo:.9}, {theta_hi:.9}] (gap {gap:.3e})")]
    BranchAmbiguity { theta_lo: f64, theta_hi: f64, gap: f64 },

    #[error("point lies within {distance:.3e} of the boundary curve (clearance {clearance:.3e})")]
    TooCloseToBoundary { distance: f64, clearance: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("Hankel kernel rank is ambiguous; singular values {singular_values:?}")]
    FactorizationAmbiguous { singular_values: Vec<f64> },

    #[error("model space is empty (inner function is constant)")]
    EmptyModelSpace,

    #[error("real-type symmetry violated: defect {defect:.3e}")]
    SymmetryViolation { defect: f64 },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("degree bound ({deg_z}, {deg_w}) too small: validation residual {residual:.3e}")]
    DegreeBound { deg_z: usize, deg_w: usize, residual: f64 },

    #[error("test function has a pole inside the domain at {0}")]
    InvalidTestFunction(String),

    #[error("Fourier coefficient paths disagree by {0:.3e}")]
    FourierMismatch(f64),

    #[error("no data: {0}")]
    NoData(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable kind, used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::Conditioning { .. } => "ConditioningError",
            Error::InvalidFactor(_) => "InvalidFactor",
            Error::IllPosedComposition(_) => "IllPosedComposition",
            Error::BoundaryPole { .. } => "BoundaryPole",
            Error::BranchAmbiguity { .. } => "BranchAmbiguity",
            Error::TooCloseToBoundary { .. } => "TooCloseToBoundary",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::FactorizationAmbiguous { .. } => "FactorizationAmbiguous",
            Error::EmptyModelSpace => "EmptyModelSpace",
            Error::SymmetryViolation { .. } => "SymmetryViolation",
            Error::DegenerateCurve(_) => "DegenerateCurve",
            Error::DegreeBound { .. } => "DegreeBoundError",
            Error::InvalidTestFunction(_) => "InvalidTestFunction",
            Error::FourierMismatch(_) => "FourierMismatch",
            Error::NoData(_) => "NoData",
            Error::NoConvergence(_) => "NoConvergence",
            Error::Schema(_) => "SchemaError",
        }
    }
}
