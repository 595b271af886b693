use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),
    #[error("symbol {0:?} cannot be used in an alphabet")]
    ReservedSymbol(char),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("symbol index outside the alphabet")]
    SymbolOutOfRange,
    #[error("period must be non-empty")]
    InvalidPeriod,
    #[error("expected `spine,period`")]
    MissingComma,
    #[error("word {0} occurs both positively and negatively")]
    ConflictingSample(String),
    #[error("machines are over different alphabets")]
    AlphabetMismatch,
    #[error("transition system is not complete")]
    Incomplete,
    #[error("priority mapping is not weak")]
    NotWeak,
    #[error("default transition system is not consistent")]
    DefaultInconsistent,
    #[error("transition system is not MN-consistent with the sample")]
    MnPrecondition,
    #[error("labels of both signs inside one strongly connected component")]
    PurityViolation,
    #[error("positive and negative idempotent classes share a strongly connected component")]
    ImpureScc,
    #[error("automaton does not refine the leading congruence")]
    RefinementViolation,
    #[error("product construction exceeds {0} states")]
    StateBudgetExceeded(usize),
    #[error("teacher answered inconsistently")]
    TeacherInconsistent,
    #[error("words are not separable")]
    NotSeparable,
    #[error("no disagreeing prefix found")]
    NoDisagreement,
    #[error("characteristic sample construction did not converge")]
    NoConvergence,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
