use thiserror::Error;

/// Errors raised by the geometric and certification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("degenerate lattice basis")]
    DegenerateBasis,
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("need at least two points")]
    TooFewPoints,
    #[error("point {0} is not in the set")]
    NotInSet(String),
    #[error("point {point} lies closer than {radius} to the window boundary")]
    NearBoundary { point: String, radius: String },
    #[error("no interior points at radius {radius}")]
    NoInteriorPoints { radius: String },
    #[error("no 2R-chain found inside the window between {from} and {to}")]
    ChainNotFound { from: String, to: String },
    #[error("cluster spans only {rank} of {dim} dimensions; its symmetry group is infinite")]
    RankDeficient { rank: usize, dim: usize },
    #[error("not centrally symmetric: {center} has {point} without antipode")]
    NotAntipodal { center: String, point: String },
    #[error("generation cap of {cap} points exceeded")]
    CapExceeded { cap: usize },
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("{n} cosets in dimension {dim} exceeds the bound 2^d - 1")]
    CosetBound { n: usize, dim: usize },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("radius expression has too many incommensurable square-root terms")]
    RadiusTooComplex,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
