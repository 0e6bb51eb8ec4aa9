use std::io;

/// Everything a command can fail with.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] streamcalc::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        CliError::Format {
            line,
            message: message.into(),
        }
    }

    /// 1 for errors about the mathematics, 2 for malformed input.
    pub fn exit_code(&self) -> i32 {
        use streamcalc::Error as E;
        match self {
            CliError::Core(
                E::Syntax(_)
                | E::InvalidScalar(_)
                | E::InvalidField(_)
                | E::NotPrime(_)
                | E::ShapeMismatch(_),
            ) => 2,
            CliError::Core(_) => 1,
            CliError::Format { .. } | CliError::Io { .. } | CliError::Usage(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
