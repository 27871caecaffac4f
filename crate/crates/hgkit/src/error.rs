use thiserror::Error;

/// Unified error type for the graph, tree, group, and partition operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} {id} out of range (size {bound})")]
    OutOfRange {
        what: &'static str,
        id: usize,
        bound: usize,
    },

    #[error("{0} vertex set is empty")]
    EmptySide(&'static str),

    #[error("budget exceeded: {task} needs {needed} but the cap is {cap} (override with HW_BUDGET)")]
    BudgetExceeded {
        task: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("density denominator is zero: {0}")]
    ZeroSide(&'static str),

    #[error("tree is missing an entry at position {0:?}")]
    MissingEntry(String),

    #[error("invalid subtree selection: {0}")]
    InvalidSubtree(String),

    #[error("invalid node-class partition: {0}")]
    BadPartition(String),

    #[error("internal split invariant violated: neither class contains its guaranteed subtree")]
    SplitViolation,

    #[error("tree height {got} does not match the required height {want}")]
    BadHeight { got: usize, want: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("multiplication table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("multiplication table has no identity element")]
    NoIdentity,

    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),

    #[error("multiplication table is not a Latin square ({0})")]
    NotLatinSquare(String),

    #[error("subset is not a normal subgroup: {0}")]
    NotNormal(String),

    #[error("witness does not verify: {0}")]
    InvalidWitness(String),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("{side} part {index} is empty")]
    EmptyPart { side: &'static str, index: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
