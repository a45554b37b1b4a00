use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("pole of {op} at {at}")]
    Pole { op: &'static str, at: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid record {record}: {msg}")]
    InvalidRecord { record: String, msg: String },

    #[error("unknown prime factor {0}")]
    UnknownFactor(String),

    #[error("divergent ({regime}): {msg}")]
    Divergent { regime: &'static str, msg: String },

    #[error("root not bracketed on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    /// Short machine-readable tag, used for the `error` field of CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Pole { .. } => "pole",
            Error::Range(_) => "range",
            Error::Parse { .. } => "parse",
            Error::InvalidRecord { .. } => "invalid_record",
            Error::UnknownFactor(_) => "unknown_factor",
            Error::Divergent { .. } => "divergent",
            Error::Bracket { .. } => "bracket",
            Error::Precondition(_) => "precondition",
            Error::Verification(_) => "verification",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
