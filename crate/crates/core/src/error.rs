use thiserror::Error;

/// Errors surfaced by the library. Inconclusive analyses (precision
/// exhaustion, bounded searches coming up empty) are distinguished from
/// genuine input errors so callers can map them to different exit codes.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("the given element set is not a subgroup")]
    NotASubgroup,
    #[error("lattices are defined over different groups")]
    GroupMismatch,
    #[error("group order {0} is not a power of the prime {1}")]
    OrderNotPPower(usize, u64),
    #[error("group order exceeds the cap of {0} elements")]
    OrderCapExceeded(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup has order {got}, expected {expected}")]
    WrongOrder { expected: usize, got: usize },
    #[error("element is not idempotent modulo p")]
    NotIdempotentModP,
    #[error("idempotent does not split the lattice at reachable precision")]
    PrecisionExhausted,
    #[error("restriction is not a permutation module over the order-p subgroup")]
    NotPermutationOverC,
    #[error("summand is not flagged indecomposable")]
    NotIndecomposable,
    #[error("supplied candidate is invalid: {0}")]
    CandidateInvalid(String),
    #[error("bounded search found no witness (not a disproof)")]
    SearchInconclusive,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
