use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unbalanced degree: {outputs} output strings vs {inputs} input strings")]
    Unbalanced { outputs: usize, inputs: usize },
    #[error("{what}: {needed} exceeds limit {limit}")]
    LimitExceeded { what: &'static str, needed: u128, limit: u128 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegreeMismatch(_) => "degree-mismatch",
            Error::SizeMismatch(_) => "size-mismatch",
            Error::SignatureMismatch(_) => "signature-mismatch",
            Error::Unbalanced { .. } => "unbalanced",
            Error::LimitExceeded { .. } => "limit",
            Error::Invalid(_) => "invalid",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// The message without the category prefix.
    pub fn detail(&self) -> String {
        match self {
            Error::DegreeMismatch(m)
            | Error::SizeMismatch(m)
            | Error::SignatureMismatch(m)
            | Error::Invalid(m)
            | Error::Parse(m)
            | Error::Io(m) => m.clone(),
            Error::Unbalanced { outputs, inputs } => format!("{outputs} output strings vs {inputs} input strings"),
            e => e.to_string(),
        }
    }

    /// Process exit code: 2 usage, 3 limit, 4 mathematical precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::LimitExceeded { .. } => 3,
            _ => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
