use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: usize, cap: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("the sets must be nonempty")]
    EmptySet,

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An operation of the proof was called before the steps it depends on.
    #[error("operation called out of order: {0}")]
    CallerOrder(String),

    /// No descent move exists from the current convergent.
    #[error("descent stalled: no candidate move from the current convergent")]
    DescentStall,

    /// Neither a descent move nor the direct inequality is available.
    /// Reaching this would falsify the addition theorem.
    #[error("internal proof falsification: {0}")]
    ProofFalsified(String),

    #[error("search budget exceeded: {size} > {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("malformed certificate: {0}")]
    Certificate(String),
}
