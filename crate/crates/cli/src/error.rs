use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INCOMPARABLE: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Incomparable(String),
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Incomparable(_) => exit::INCOMPARABLE,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<progc_core::Error> for CliError {
    fn from(err: progc_core::Error) -> Self {
        use progc_core::Error as E;
        match err {
            E::RuleRange { .. } | E::Domain { .. } | E::Argument(_) => CliError::Usage(err.to_string()),
            E::Incomparable(msg) => CliError::Incomparable(msg),
            E::DegenerateFit(_) => CliError::Internal(err.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Internal(err.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
