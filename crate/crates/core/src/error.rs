use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),

    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(u8),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot construct fixed point: {0}")]
    Construction(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown source {0:?}")]
    UnknownSource(String),

    #[error("factor set of length {length} not saturated within a prefix of {prefix_len} letters")]
    Saturation { length: usize, prefix_len: usize },

    #[error("return words of {factor} not stabilized within a prefix of {prefix_len} letters")]
    Stabilization { factor: String, prefix_len: usize },

    #[error("{0} is not a factor of the word")]
    NotAFactor(String),

    #[error("length {n} outside the certified range 0..={max}")]
    OutOfRange { n: usize, max: usize },

    #[error("reduction not applicable: {0}")]
    ReductionNotApplicable(String),

    #[error("return trie of {factor} exceeds depth cap {cap}")]
    DepthCap { factor: String, cap: usize },

    #[error("precondition not established: {0}")]
    Precondition(String),

    #[error("numeric precision: {0}")]
    NumericPrecision(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

impl Error {
    /// True for failures of the finite-prefix certificates.
    pub fn is_certification(&self) -> bool {
        matches!(self, Error::Saturation { .. } | Error::Stabilization { .. })
    }
}
