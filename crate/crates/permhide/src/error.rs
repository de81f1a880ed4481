use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("divisibility: {0}")]
    Divisibility(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("not simple: {0}")]
    NotSimple(String),
    #[error("partial map is not injective: {0}")]
    NotInjective(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("not a permutation graph: {0}")]
    NotPermutationGraph(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("corrupt instance: {0}")]
    CorruptInstance(String),
    #[error("state budget exceeded at element {index}: {bits} bits > {budget}")]
    BudgetExceeded { index: usize, bits: u64, budget: u64 },
    #[error("stream has no provenance tags")]
    MissingTags,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
