use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Where an exhaustive search stopped when it ran out of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    /// Work units spent before giving up.
    pub spent: u64,
    /// Parameter prefix (right-side ranks) on the search stack when the budget ran out.
    pub prefix: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arity {0} is not supported (expected 2..=4)")]
    UnsupportedArity(usize),
    #[error("part sizes must be positive, got {0:?}")]
    BadPartSizes(Vec<usize>),
    #[error("tuple {0:?} is out of range")]
    InvalidEdge(Vec<usize>),
    #[error("invalid coordinate grouping: {0}")]
    InvalidGrouping(String),
    #[error("slice would leave {0} coordinates, at least 2 are required")]
    ArityUnderflow(usize),
    #[error("part {0} is restricted to the empty set")]
    EmptyPart(usize),
    #[error("set has measure zero")]
    DegenerateSet,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("search budget exhausted after {} work units", .0.spent)]
    BudgetExceeded(SearchState),
    #[error("witness height {got} does not match the required height {expected}")]
    BadHeight { expected: usize, got: usize },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("proportional error split is infeasible: {0}")]
    Infeasible(String),
    #[error("no representative slice for class {0}")]
    NoRepresentative(usize),
    #[error("heuristic failed: {0}")]
    HeuristicFailed(String),
}
