use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("edge-list parse error: {0}")]
    Parse(String),
    #[error("decomposition requires n > k (got n = {n}, k = {k}); with k >= n put one cop per vertex")]
    TooManyCops { n: usize, k: usize },
    #[error("sector invariant violated: {0}")]
    SectorInvariant(String),
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, more than {tolerance} away from 1")]
    ProbabilitySum { sum: f64, tolerance: f64 },
    #[error("distribution schedule must not be empty")]
    EmptySchedule,
    #[error("distribution length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid cop schedule: {0}")]
    InvalidSchedule(String),
    #[error("strategy and gambler model are incompatible: {0}")]
    Incompatible(String),
    #[error("no capture within {cap} turns")]
    TurnCapExceeded { cap: u64 },
    #[error("expected capture time is undefined: the schedule never captures")]
    NeverCaptured,
    #[error("per-round capture probability {0:e} is too small for stable evaluation")]
    NumericalDegeneracy(f64),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
