use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A text input could not be read; wraps the underlying cause with its line number.
    #[error("line {line}: {error}")]
    AtLine { line: usize, error: Box<Error> },

    #[error("{0}")]
    Syntax(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),

    #[error("triple ({0}, {1}, {2}) repeats a node")]
    RepeatedEntry(String, String, String),

    #[error("chain has {0} node(s); at least 3 are required")]
    ChainTooShort(usize),

    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),

    #[error("not an O-forest: the nodes above `{0}` are not linearly ordered")]
    NotOForest(String),

    #[error("not an O-tree: `{0}` and `{1}` have no common upper bound")]
    NotOTree(String, String),

    #[error("not a join-tree: `{0}` and `{1}` have no least upper bound")]
    NotJoinTree(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("set family overlaps: {0}")]
    Overlap(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("search budget exceeded before the enumeration was complete")]
    BudgetExceeded,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn at_line(line: usize, error: Error) -> Error {
        Error::AtLine {
            line,
            error: Box::new(error),
        }
    }

    /// The innermost error, with line annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { error, .. } => error.root(),
            other => other,
        }
    }
}
