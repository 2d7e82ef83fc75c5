use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the family's admissible set.
    #[error("{family}: constraint violated: {constraint}")]
    ConstraintViolation { family: String, constraint: String },

    #[error("{family} is not available in dimension {d}: {reason}")]
    DimensionUnsupported {
        family: String,
        d: usize,
        reason: String,
    },

    #[error("{what}: expected {expected} values, got {got}")]
    ArityMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    #[error("unknown family `{name}`; available families: {available}")]
    UnknownFamily { name: String, available: String },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder did not converge within {0} iterations")]
    MaxIterExceeded(usize),

    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("sampler failed at row {row}: {source}")]
    SamplerFailure {
        row: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{family} has no frailty representation: {reason}")]
    FrailtyUnavailable { family: String, reason: String },

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("asymmetric logistic weights of coordinate {coordinate} sum to {sum}, expected 1")]
    WeightRowSumViolation { coordinate: usize, sum: f64 },

    #[error("extremal-function loop exceeded {cap} proposals")]
    IterationCap { cap: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("madogram inversion denominator {0:e} is degenerate")]
    DegenerateDenominator(f64),

    #[error("Monte Carlo iteration {iteration} failed: {source}")]
    IterationFailed {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn constraint(family: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::ConstraintViolation {
            family: family.into(),
            constraint: constraint.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
