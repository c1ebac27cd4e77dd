use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} must not be the zero vector")]
    ZeroVector(&'static str),

    #[error("base eigenvalues must be finite and strictly increasing")]
    EigenvaluesNotIncreasing,

    #[error("declared gap {declared} exceeds actual minimal gap {actual}")]
    GapViolation { declared: f64, actual: f64 },

    #[error("base operator carries no gap bound (gap_d) but the operation requires one")]
    MissingGap,

    #[error("evaluation point {z} collides with a pole (distance {dist:.3e})")]
    PoleCollision { z: Complex64, dist: f64 },

    #[error("{z} is (near) an eigenvalue of the perturbed operator: |F(z)| = {f_abs:.3e}")]
    NearEigenvalue { z: Complex64, f_abs: f64 },

    #[error("{z} is not an eigenvalue of the perturbed operator")]
    NotAnEigenvalue { z: Complex64 },

    #[error("zero order undetermined at {z}: all scaled derivatives up to {cap} vanish")]
    OrderUndetermined { z: Complex64, cap: usize },

    #[error("genericity violation: {0}")]
    Genericity(String),

    #[error("multiplicity budget mismatch: targets total {requested}, window holds {available}")]
    MultiplicityBudget { requested: usize, available: usize },

    #[error("target point {z} lies on the base spectrum (nearest eigenvalue {lambda})")]
    TargetOnSpectrum { z: Complex64, lambda: f64 },

    #[error("linear system is numerically singular: {0}")]
    SingularSystem(String),

    #[error("ill-conditioned problem: condition estimate {estimate:.3e}")]
    IllConditioned { estimate: f64 },

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("window too small to certify the tail bound: {0}")]
    InsufficientTruncation(String),

    #[error("epsilon {eps} too large: circles overlap (gap {gap})")]
    EpsilonTooLarge { eps: f64, gap: f64 },

    #[error("numerical rank did not stabilize within power {max_power}")]
    RankNotStabilized { max_power: usize },

    #[error("matrix dimension {dim} exceeds the dense-oracle cap {cap}")]
    OracleDimension { dim: usize, cap: usize },

    #[error("contour passes too close to an eigenvalue: {0}")]
    ContourTooClose(String),

    #[error("requested chain of {requested} vectors but certified order admits {certified}")]
    ChainTooLong { requested: usize, certified: usize },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("theory/oracle mismatch: {0}")]
    Diagnostic(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
