use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,

    #[error("label at position {0} is empty")]
    EmptyLabel(usize),

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("expected {expected} weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("negative or non-finite weight {weight} for label {label:?}")]
    NegativeWeight { label: String, weight: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    SumNotOne { sum: f64 },

    #[error("all weights are zero")]
    AllZero,

    #[error("label sets differ: {0}")]
    LabelMismatch(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("signal {0:?} has zero marginal probability")]
    ZeroProbabilitySignal(String),

    #[error("outcome {0:?} has positive probability but a zero quote probability")]
    UnsupportedOutcome(String),

    #[error("quote multiplier {value} for outcome {label:?} is not positive")]
    NonpositiveQuote { label: String, value: f64 },

    #[error("quote probabilities sum to {sum}, not 1 (markets with costs are not supported)")]
    QuoteSumNotOne { sum: f64 },

    #[error("DegenerateSystem: {0}")]
    DegenerateSystem(String),

    #[error("outcome marginals differ between information sets {first:?} and {other:?}")]
    MarginalMismatch { first: String, other: String },

    #[error("value {value} outside the domain {domain}")]
    DomainViolation { value: f64, domain: String },

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("wealth hit zero in round {round}: strategy staked nothing on the realized outcome")]
    BankruptcyUnderflow { round: u64 },

    #[error("only binary outcome alphabets are supported, got {0} outcomes")]
    UnsupportedAlphabet(usize),

    #[error("{requested} resamples requested, at least {minimum} are required")]
    TooFewResamples { requested: usize, minimum: usize },

    #[error("line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("no sample records found (input ends at line {line})")]
    EmptyInput { line: usize },
}

impl Error {
    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::EmptyInput { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
