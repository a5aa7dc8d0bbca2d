use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol {symbol:?} at position {position}")]
    UnknownSymbol { position: usize, symbol: char },
    #[error("empty sequence")]
    EmptySequence,
    #[error("malformed FASTA at line {line}: {reason}")]
    MalformedFasta { line: usize, reason: String },
    #[error("malformed ground truth at line {line}: {reason}")]
    MalformedTruth { line: usize, reason: String },
    #[error("bad alphabet: {0}")]
    BadAlphabet(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("start position {start} out of range 1..={max} for sequence {sequence}")]
    BadStart {
        sequence: usize,
        start: usize,
        max: usize,
    },
    #[error("enumeration of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("count does not fit in 128 bits")]
    Overflow,
    #[error("search timed out")]
    TimedOut,
}

pub type Result<T> = std::result::Result<T, Error>;
