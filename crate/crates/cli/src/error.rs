use std::fmt;
use std::path::{Path, PathBuf};

/// Failures that stop a run before any check executes (exit code 2).
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Config {
        file: Option<PathBuf>,
        line: usize,
        column: usize,
        message: String,
    },
}

impl CliError {
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Config { line, column, message, .. } => {
                CliError::Config { file: Some(path.to_path_buf()), line, column, message }
            }
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Config { file, line, column, message } => {
                if let Some(p) = file {
                    write!(f, "{}:", p.display())?;
                }
                write!(f, "{line}:{column}: {message}")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<gkernel::Error> for CliError {
    fn from(e: gkernel::Error) -> Self {
        match e {
            gkernel::Error::Parse { line, column, message } => {
                CliError::Config { file: None, line, column, message }
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
