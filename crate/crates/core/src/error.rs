use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{requested} qubits exceeds the dense limit of {limit}")]
    QubitLimit { requested: usize, limit: usize },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("malformed state: {0}")]
    MalformedState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("input length {got} does not match PRF domain of {expected} bits")]
    InputLength { expected: usize, got: usize },

    #[error("fidelity needs at least one rank-1 argument")]
    NotPure,

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("banknote scheme does not match the verifier configuration")]
    SchemeMismatch,

    #[error("invalid measurement policy output: {0}")]
    InvalidPolicy(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        detail: detail.into(),
    }
}
