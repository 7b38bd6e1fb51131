use alloc::string::String;

use crate::dynamics::Natural;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("starting value must be a positive integer")]
    ZeroStart,

    #[error("iteration budget of {budget} steps exhausted from {start}")]
    BudgetExhausted { start: Natural, budget: u64 },

    #[error("ones-count {q} exceeds vector length {j}")]
    OnesExceedLength { j: u64, q: u64 },

    #[error("sequence has no odd term before its last one")]
    NoOddTerms,

    #[error("length {j} exceeds the configured cap {cap}")]
    CapExceeded { j: u64, cap: u64 },

    #[error("comparison undecided at {precision} bits")]
    Undecided { precision: u32 },

    #[error("length {0} cannot be classified by the harmonic cap")]
    UnsupportedLength(u64),

    #[error("pair ({a}, {b}) violates 1 - 1/(4n) < 3^a/2^b < 1 for n = {n}")]
    PairOutsideSet { n: Natural, a: u64, b: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {detail}")]
    MalformedLine { line: usize, detail: String },

    #[error("record table mismatch at entry {index}: {detail}")]
    RecordMismatch { index: usize, detail: String },

    #[error("record tables do not cover {0}")]
    MissingCoverage(String),
}
