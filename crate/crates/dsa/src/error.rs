use num_bigint::BigInt;
use thiserror::Error;

/// Errors produced by parsing, validation, and the analysis operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input text does not match the line grammar of the automaton format.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// The input is grammatically well-formed but violates a validity rule
    /// (unknown state/symbol, lambda < 2, duplicate transition, ...).
    #[error("invalid automaton: {0}")]
    Invalid(String),

    /// A word refers to a symbol that is not in the automaton's alphabet.
    #[error("symbol `{0}` not in alphabet")]
    UnknownSymbol(String),

    /// A state name that is not in the automaton's state set.
    #[error("unknown state `{0}`")]
    UnknownState(String),

    /// A gap query whose value is undefined (e.g. both states unreachable,
    /// or the upper state reachable while the lower one is not).
    #[error("gap undefined: {0}")]
    UndefinedGap(String),

    /// Recovery-suffix search called with the lower/upper states out of order.
    #[error("gap order violated: {0}")]
    GapOrder(String),

    /// A normalized difference failed to be an integer. For integral automata
    /// this signals an internal arithmetic bug rather than a user error.
    #[error("normalized difference is not an integer: {0}")]
    NonIntegral(String),

    /// The closed-form threshold exponent exceeds the configured cap.
    #[error(
        "threshold exponent {exponent} exceeds cap {cap} (raise the cap to analyse this automaton)"
    )]
    ExponentCap { exponent: BigInt, cap: u64 },

    /// A state-space search hit its node budget. This is a resource outcome,
    /// never a mathematical one.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Run enumeration called on a word longer than the enumeration cap.
    #[error("word length {len} exceeds run-enumeration cap {cap}")]
    RunCap { len: usize, cap: usize },

    /// Two automata that were expected to share an alphabet do not.
    #[error("alphabets differ")]
    AlphabetMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
