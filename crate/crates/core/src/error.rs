use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("sequence has zero total mass")]
    ZeroMass,

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown token {token:?} at position {position}")]
    UnknownToken { token: String, position: usize },

    #[error("count vector has length {found}, alphabet has {expected} symbols")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid span [{start}, {end}) for sequence of length {len}")]
    InvalidSpan { start: usize, end: usize, len: usize },

    #[error("span too short to split")]
    SpanTooShort,

    #[error("empty profile")]
    EmptyProfile,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no speeches found")]
    NoSpeeches,

    #[error("SMPTE timing unsupported")]
    SmpteUnsupported,

    #[error("truncated {what} at byte offset {offset}")]
    Truncated { what: &'static str, offset: usize },

    #[error("malformed MIDI at byte offset {offset}: {message}")]
    MalformedMidi { offset: usize, message: String },

    #[error("unrepresentable bar length")]
    UnrepresentableBarLength,

    #[error("no note onsets")]
    NoOnsets,

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("invalid tree document: {0}")]
    Schema(String),
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }

    /// Whether the error stems from caller-supplied settings rather than input data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidConfig(_))
    }
}
