use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("register of {qubits} qubits exceeds the dense limit of {limit} qubits; use the Bell-diagonal representation")]
    TooLarge { qubits: usize, limit: usize },

    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),

    #[error("negative weight {0}")]
    NegativeWeight(f64),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("Bell index must be in 1..=4, got {0}")]
    BellIndex(u8),

    #[error("invalid permutation `{0}`")]
    Permutation(String),

    #[error("no local unitary pair realizes permutation {0} within the closure bound")]
    PermutationNotFound(String),

    #[error("copy {0} has already been consumed")]
    ConsumedCopy(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
