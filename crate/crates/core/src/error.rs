use thiserror::Error;

/// Errors raised by the verification toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("inconsistent basis: residual imaginary part {0:e}")]
    InconsistentBasis(f64),
    #[error("basis or shape mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree overflow: degree {degree} form on a {dim}-dimensional chart")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("wrong degree: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("wrong manifold: expected {expected}, found {found}")]
    WrongManifold { expected: String, found: String },
    #[error("derivative data missing: jet order {have} < {need}")]
    JetOrder { have: usize, need: usize },
    #[error("non-unitary sample at node {node}: deviation {deviation:e}")]
    NonUnitary { node: usize, deviation: f64 },
    #[error("non-Hermitian potential: deviation {0:e}")]
    NonHermitian(f64),
    #[error("identity check failed: {what} residual {residual:e}")]
    IdentityViolation { what: String, residual: f64 },
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("undeclared intersection {0:?}")]
    UndeclaredIntersection(Vec<usize>),
    #[error("invalid index combination: {0}")]
    InvalidCase(String),
    #[error("support violation: |value| {value:e} outside support ball at node {node}")]
    SupportViolation { node: usize, value: f64 },
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not an automorphism action: {0}")]
    NotAction(String),
    #[error("subgroup is not central: {0}")]
    NonCentral(String),
    #[error("reference value {reference} within {gap:e} of the spectrum")]
    ReferenceOnSpectrum { reference: f64, gap: f64 },
    #[error("eigenvalue tracking failed on t in [{t0}, {t1}] after maximal refinement")]
    GapResolution { t0: f64, t1: f64 },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
