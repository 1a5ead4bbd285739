use thiserror::Error;

/// Every failure the engine can report. Mathematical hypothesis failures
/// (non-primary input, no stabilization within a cap) are ordinary values of
/// this type, not panics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("ideal is not m-primary (no full degree layer below {limit})")]
    NotMPrimary { limit: u32 },
    #[error("truncation degree {available} is insufficient, need {needed}")]
    TruncationInsufficient { needed: u32, available: u32 },
    #[error("ideals live in different contexts")]
    ContextMismatch,
    #[error("h-polynomial did not stabilize within {computed} Hilbert values")]
    NoStabilization { computed: usize },
    #[error("coefficient e_{index} = {value} is not an integer")]
    IntegralityViolation { index: usize, value: String },
    #[error("colon chain for power {power} did not stabilize within {cap} steps")]
    ChainNotStabilized { power: u32, cap: u32 },
    #[error("search for {what} exhausted at {cap}")]
    SearchExhausted { what: String, cap: u32 },
    #[error("filtration coefficient mismatch: e_{index} = {expected} but tilde e_{index} = {found}")]
    ConsistencyViolation {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("not a reduction: {0}")]
    NotAReduction(String),
    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: u32, reason: String },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
}

pub type Result<T> = std::result::Result<T, EngineError>;
