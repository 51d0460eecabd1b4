use thiserror::Error;

/// Errors produced by construction and validation across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid partition: N_A = {n_a} must satisfy 1 <= N_A <= N - 1 with N = {n}")]
    InvalidPartition { n: usize, n_a: usize },

    #[error("charge sector k = {k} does not exist for {n} qubits")]
    InvalidSector { k: usize, n: usize },

    #[error("distribution width must be positive, got {width}")]
    NonPositiveWidth { width: f64 },

    #[error("cat-product blocks do not tile the system: M = {blocks} times L = {block_size} != N = {n}")]
    BlockMismatch { blocks: usize, block_size: usize, n: usize },

    #[error("tabulated weights have length {got}, expected {expected} (one per charge sector)")]
    WeightLength { got: usize, expected: usize },

    #[error("tabulated weights must be nonnegative with a positive sum")]
    InvalidWeights,

    #[error("operation requires a Gaussian input distribution, got {got}")]
    KindMismatch { got: &'static str },

    #[error("parameters outside the log domain: 1 + n_A (delta^2 - 1) = {value} <= 0")]
    LogDomain { value: f64 },

    #[error("combinatorial domain violation: need 1 <= k <= r, got r = {r}, k = {k}")]
    CombinatorialDomain { r: u64, k: u64 },

    #[error("Renyi order must be >= 2, got {order}")]
    RenyiOrder { order: u32 },

    #[error("{quantity} = {value} exceeds the supported limit {limit}")]
    ResourceLimit { quantity: &'static str, value: usize, limit: usize },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed distribution file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
