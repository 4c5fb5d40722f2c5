use thiserror::Error;

/// Errors raised by constructors, kernels and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("non-finite value at index {index}")]
    NonFiniteInput { index: usize },
    #[error("all weights are zero, cannot normalize")]
    ZeroTotalMass,
    #[error("weights sum to {sum}, not within {tol:e} of 1")]
    NotNormalized { sum: f64, tol: f64 },
    #[error("size must be at least 1")]
    ZeroSize,
    #[error("block {block} has zero marginal probability")]
    ZeroMarginal { block: usize },
    #[error("block index {index} out of range for {len} blocks")]
    BlockOutOfRange { index: usize, len: usize },
    #[error("denominator {denominator} is smaller than support size {n}")]
    DenominatorTooSmall { denominator: u64, n: usize },
    #[error("q must be positive and finite, got {0}")]
    InvalidQ(f64),
    #[error("unknown phi function `{0}`")]
    UnknownPhi(String),
    #[error("phi evaluated to a non-finite value at q = {q}")]
    NonFinitePhi { q: f64 },
    #[error("phi({q}) = 0 at q != 1")]
    PhiZero { q: f64 },
    #[error("phi'(1) = {derivative} is too close to zero for the q -> 1 limit")]
    PhiDerivativeZero { derivative: f64 },
    #[error("bad q grid: {0}")]
    BadGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
