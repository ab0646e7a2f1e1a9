use thiserror::Error;

/// Errors raised by the library. Search exhaustion and regularity verdicts are
/// ordinary results, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    InvalidGraph(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("capacity exceeded: {what} needs {needed} subsets, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("edges lie in different tight components")]
    NotTightlyConnected,

    #[error("terminal tuple {left:?} does not match initial tuple {right:?}")]
    TupleMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("total walk length {total} is not divisible by k = {k}")]
    WalkTotalNotDivisible { total: u64, k: usize },

    #[error("n_{index} = {value} exceeds the bound {bound}")]
    FillBound {
        index: usize,
        value: u64,
        bound: String,
    },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("ratio hypothesis fails: e_k is short by {deficit}")]
    RatioHypothesis { deficit: u64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("slice does not belong to this family: {0}")]
    ForeignSlice(String),

    #[error("density undefined: {0}")]
    UndefinedDensity(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("linear program is unbounded")]
    Unbounded,
}

pub type Result<T> = std::result::Result<T, Error>;
