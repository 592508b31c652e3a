use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational {0:?} (expected a/b or an integer)")]
    ParseRational(String),

    #[error("invalid coefficient set: {0}")]
    InvalidCoeffSet(String),

    #[error("cutoff {0} must satisfy 0 <= cutoff < 1")]
    CutoffOutOfRange(String),

    #[error("invalid bounds: floor {floor} must not exceed bound {bound}")]
    FloorAboveBound { floor: String, bound: String },

    #[error("invalid multiplicity profile: {0}")]
    InvalidProfile(String),

    #[error("invalid line arrangement: {0}")]
    InvalidArrangement(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("degenerate profile: some line has 2a_i >= d ({0}); use the degenerate formula")]
    DegenerateProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle budget exceeded at q = {q} (estimated work {work}, limit {limit}, e = {e}, max e = {max_e})")]
    BudgetExceeded {
        q: u64,
        e: u32,
        max_e: u32,
        work: u128,
        limit: u128,
    },

    #[error("the coefficient sum set is empty")]
    EmptySumSet,

    #[error("no admissible perturbation 1/k with k <= {0}")]
    NoPerturbation(u64),

    #[error("closed form mismatch: {0}")]
    ClosedFormMismatch(String),
}
