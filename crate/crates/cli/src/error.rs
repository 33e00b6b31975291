use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config file, or parameters rejected by the library.
    #[error("{0}")]
    Config(String),
    /// A verification suite ran and reported failures.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(1),
            CliError::Config(_) | CliError::Io(_) => ExitCode::from(2),
        }
    }
}

impl From<checkerboard::Error> for CliError {
    fn from(e: checkerboard::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
