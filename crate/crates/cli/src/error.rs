use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable files or malformed records.
    #[error("{0}")]
    Input(String),
    /// The numerical pipeline failed on valid input.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    /// Tags a pipeline error with the record it came from.
    pub fn from_core(context: &str, e: rootforms::Error) -> Self {
        let msg = format!("{context}: {e}");
        if e.is_input_error() {
            CliError::Input(msg)
        } else {
            CliError::Numerical(msg)
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
