use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),

    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("operator is not {expected}")]
    WrongKind { expected: &'static str },

    #[error("operator is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver did not converge: {0}")]
    NotConverged(String),

    #[error("eigenvector {l} is close to self-orthogonal (bilinear norm {norm:.3e})")]
    NearDefective { l: usize, norm: f64 },

    #[error("mode {l} has negative decay rate {gamma:.3e}")]
    NegativeDecayRate { l: usize, gamma: f64 },

    #[error("unperturbed levels {l} and {r} are degenerate (gap {gap:.3e})")]
    DegenerateGap { l: usize, r: usize, gap: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("no perturbation for nearest-neighbour chains (nu = inf)")]
    InfiniteExponent,

    #[error("formula requires traps at both chain ends, got {0:?}")]
    TrapsNotAtEnds(Vec<usize>),

    #[error("need at least 3 points in fit window, got {0}")]
    TooFewPoints(usize),

    #[error("non-positive data at index {index} in fit window")]
    NonPositiveData { index: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("time grids differ")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
