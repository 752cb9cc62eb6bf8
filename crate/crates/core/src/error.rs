use thiserror::Error;

/// Errors raised across the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("group closure exceeded the order cap of {cap}")]
    OrderExceeded { cap: usize },

    #[error("generator `{name}` is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { name: String, residual: f64 },

    #[error("generator matrices do not all have the same size")]
    ShapeMismatch,

    #[error("representation violates the group law (residual {residual:.3e})")]
    NotAHomomorphism { residual: f64 },

    #[error("expected an integer, got {value} (residual {residual:.3e})")]
    NotIntegral { value: f64, residual: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalMismatch(String),

    #[error("isotypic splitting failed after {attempts} attempts")]
    SplitFailed { attempts: usize },

    #[error("trace formula gives {expected} equivariants but the Reynolds basis has rank {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no nonzero equivariants up to degree {max_degree}")]
    NoEquivariants { max_degree: usize },

    #[error("restricted map leaves the fixed subspace of the target (residual {residual:.3e})")]
    FixViolation { residual: f64 },

    #[error("linear part never reached rank {target} in {draws} random draws")]
    GenericRankFailed { target: usize, draws: usize },

    #[error("lowest-degree equivariants exceed the degree budget {budget}")]
    DegreeCapExceeded { budget: usize },

    #[error("multiplicity comparison differs between delta and delta/endo_dim (endo_dim {endo_dim})")]
    EndoTypeAmbiguous { endo_dim: usize },

    #[error("case dispatch mismatch: {0}")]
    CaseMismatch(String),

    #[error("parameter vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("representations are defined over different groups")]
    GroupMismatch,

    #[error("spec error: {0}")]
    Spec(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
