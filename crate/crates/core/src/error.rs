use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// The CLI maps these onto its exit-code contract via [`Error::exit_code`]:
/// 2 for refusals (a hypothesis of the construction is not met), 3 for
/// verification failures, 4 for resource aborts, 1 for everything else.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}; supported: primes <= 31 and 4, 8, 9, 16, 25, 27")]
    UnsupportedField(u64),

    #[error("element encoding {encoding} out of range for GF({q})")]
    EncodingOutOfRange { encoding: u64, q: u8 },

    #[error("operands belong to different fields: GF({left}) vs GF({right})")]
    MixedFields { left: u8, right: u8 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("coordinate index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("enumeration of {count} subspaces exceeds cap {cap}; raise the subspace cap to proceed")]
    SubspaceCapExceeded { count: u128, cap: u64 },

    #[error("maximal-clique enumeration exceeded limit {limit} (at least {found} cliques); raise the clique limit or use assisted mode")]
    CliqueLimitExceeded { found: usize, limit: usize },

    #[error("refused: {0}")]
    Refused(String),

    #[error("verification failed: {0}")]
    Violation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("report/cache format: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit-code class: 0 is reserved for success, 2 refusal, 3 violation,
    /// 4 resource abort, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Refused(_) => 2,
            Error::Violation(_) => 3,
            Error::SubspaceCapExceeded { .. } | Error::CliqueLimitExceeded { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
