use thiserror::Error;

/// Errors raised by the trade toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TradeError {
    #[error("word length {0} outside supported range 1..=16")]
    InvalidLength(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cannot parse word {0:?}")]
    ParseWord(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("coordinate {coord} out of range for length {n}")]
    CoordinateOutOfRange { coord: usize, n: usize },
    #[error("trade parts are not disjoint (shared word {0})")]
    NotDisjoint(String),
    #[error("trade part is empty")]
    EmptyPart,
    #[error("trade parts have different sizes ({0} vs {1})")]
    UnequalVolume(usize, usize),
    #[error("duplicate word {0} in a trade part")]
    DuplicateWord(String),
    #[error("word {word} violates the {kind} weight constraint")]
    WeightViolation { word: String, kind: String },
    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("not a valid trade: {0}")]
    InvalidTrade(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Precondition(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, TradeError>;
