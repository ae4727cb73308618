use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model, scheme or estimator parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Observed data violates an ingestion or shape requirement.
    #[error("data error: {0}")]
    Data(String),

    #[error("insufficient data: {needed} observations required, {got} available")]
    InsufficientData { needed: usize, got: usize },

    /// A statistic cannot be formed from the data (for example a zero local
    /// scale or an empirical characteristic function equal to one).
    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    #[error("simulation diverged at t = {time}: {reason}")]
    Simulation { time: f64, reason: String },

    #[error("config error at line {line}, key `{key}`: {reason}")]
    Config {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("study aborted: {0}")]
    Study(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Config { .. } => 2,
            Error::Data(_) | Error::InsufficientData { .. } | Error::Simulation { .. } => 3,
            Error::Degenerate(_) | Error::Study(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
