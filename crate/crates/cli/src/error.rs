use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

impl From<nonlocal_magic::Error> for CliError {
    fn from(e: nonlocal_magic::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(with_hint(&e))
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

fn with_hint(e: &nonlocal_magic::Error) -> String {
    let msg = e.to_string();
    let hint = if msg.contains("free-fermion backend") {
        " (--backend free-fermion)"
    } else if msg.contains("sample mode") {
        " (--mode sample)"
    } else if msg.contains("state-vector") {
        " (lower --L)"
    } else {
        ""
    };
    format!("{msg}{hint}")
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialization(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialization(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
