use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("matrix has zero trace and cannot be normalized")]
    ZeroTrace,

    #[error("graph has a weight strictly between 0 and 1 ({weight}) on edge {u}-{v}")]
    NonBinaryWeights { u: usize, v: usize, weight: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("row {row} is not diagonally dominant (diagonal {diag}, off-diagonal sum {off})")]
    NotDiagonallyDominant { row: usize, diag: f64, off: f64 },

    #[error("invalid dimension vector: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (bound {bound})")]
    OutOfRange { index: usize, bound: usize },

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("operation needs exactly two factors, got {0}")]
    NotBipartiteDims(usize),

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("graph is trivial (no edges)")]
    TrivialGraph,

    #[error("graph is complete")]
    CompleteGraph,

    #[error("construction produced a labeling that does not violate the degree criterion: {0}")]
    ConstructionFailed(String),

    #[error("certificate term has negative weight {weight}")]
    NegativeWeight { weight: f64 },

    #[error("certificate does not reconstruct its target (residual {residual:e})")]
    CertificateMismatch { residual: f64 },

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("search space too large: n = {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("bad graph6 string: {0}")]
    BadGraph6(String),

    #[error("parse error: {0}")]
    Parse(String),
}
