use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("letter {letter} is outside the alphabet 0..{arity}")]
    LetterOutOfRange { letter: usize, arity: usize },

    #[error("invalid alphabet size {0}")]
    InvalidAlphabet(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid boundary point: {0}")]
    InvalidBoundaryPoint(String),

    #[error("vertex budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error("{0} is not finitary or bounded")]
    NotBounded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("commuting inputs: {0}")]
    CommutingInputs(String),

    #[error("depth overflow: {0}")]
    DepthOverflow(String),

    #[error("arithmetic overflow in integer action")]
    Overflow,
}
