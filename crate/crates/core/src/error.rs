use thiserror::Error;

/// Errors raised while building, parsing or solving problems.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable set must be nonempty")]
    EmptySet,
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("universe too large: {0} variables (at most 30 allowed)")]
    UniverseTooLarge(usize),
    #[error("coordinate {0:#b} is outside the universe")]
    CoordinateOutOfRange(u32),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid copy step: {0}")]
    InvalidCopy(String),
    #[error("invalid access structure: {0}")]
    InvalidStructure(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("symmetry generator {generator} is not an automorphism of {object}")]
    NotInvariant { generator: String, object: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("LP is infeasible (constraint families: {families})")]
    Infeasible { families: String },
    #[error("LP is unbounded")]
    Unbounded,
    #[error("pivot budget of {0} exhausted")]
    PivotBudget(u64),
    #[error("strategy space of {0} tuples exceeds the enumeration guard")]
    GuardExceeded(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
