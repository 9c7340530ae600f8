use std::process::ExitCode;

/// Failure of a CLI command, classified by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad JSON, invalid system or inconsistent arguments.
    #[error("{0}")]
    Input(String),
    /// The simulation itself failed.
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<CliError> for ExitCode {
    fn from(err: CliError) -> Self {
        ExitCode::from(err.exit_code())
    }
}

impl From<qdrive_core::Error> for CliError {
    fn from(err: qdrive_core::Error) -> Self {
        use qdrive_core::Error as E;
        match err {
            E::Integration { .. } | E::Internal(_) => CliError::Numerical(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}
