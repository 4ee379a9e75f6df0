use thiserror::Error;

/// Errors raised by the geodesic library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic modulus k = {k} outside [0, 1 - 1e-12)")]
    ModulusOutOfRange { k: f64 },

    #[error("elliptic characteristic n = {n} must be < 1")]
    CharacteristicOutOfRange { n: f64 },

    #[error("metric invariant a = {a} must lie in (0, 1)")]
    InvalidInvariant { a: f64 },

    #[error("covector ({p1}, {p2}, {p3}) is off the level set p1^2 + p2^2 = 1")]
    OffLevelSet { p1: f64, p2: f64, p3: f64 },

    #[error("energy {energy} lies within tolerance of two regions")]
    RegionBoundary { energy: f64 },

    #[error("{0}")]
    InvalidInput(String),

    #[error("time must be non-negative, got {t}")]
    NegativeTime { t: f64 },

    #[error("rotation axis must be nonzero")]
    ZeroAxis,

    #[error("derivative formulas are singular at n = {n}, k = {k}")]
    SingularDerivative { n: f64, k: f64 },

    #[error("fraction {n}/{m} is not irreducible")]
    ReducibleFraction { n: u32, m: u32 },

    #[error("transversality violated: <p, gamma0> = {residual}")]
    Transversality { residual: f64 },

    #[error("point is not on the unit sphere (|gamma| = {norm})")]
    NotOnSphere { norm: f64 },

    #[error("initial point is not on the singular set z = 0")]
    NotOnSingularSet,

    #[error("operation not defined in region {region}")]
    RegionNotSupported { region: String },

    #[error("initial point does not match Maxwell case {case}")]
    CaseMismatch { case: u8 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
