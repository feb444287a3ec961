use thiserror::Error;

/// Everything that can stop a run, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical guard: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    /// Same error with `what: ` in front of the message.
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Validation(v) => CliError::Validation(v.into_iter().map(|m| format!("{what}: {m}")).collect()),
            CliError::Config(m) => CliError::Config(format!("{what}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{what}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
        }
    }
}

impl From<deltahom::Error> for CliError {
    fn from(e: deltahom::Error) -> Self {
        use deltahom::Error as E;
        match e {
            E::DomainTooSmall { .. } | E::NonFinite(_) | E::ScatteringIncomplete { .. } => {
                CliError::Numerical(e.to_string())
            }
            E::Validation(report) => {
                CliError::Validation(report.issues.iter().map(|i| format!("{}: {}", i.field, i.message)).collect())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
