use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed configuration file.
    #[error("configuration error: {0}")]
    Config(String),

    /// A configured value fails its constraint.
    #[error("invalid {field}: {source}")]
    Invalid {
        field: String,
        #[source]
        source: copula_forge::Error,
    },

    /// Sampling or estimation failed while running.
    #[error("run failed: {0}")]
    Run(#[from] copula_forge::Error),

    #[error("i/o error: {0}")]
    Io(String),

    /// At least one property check failed.
    #[error("{0} propert(ies) failed")]
    PropertiesFailed(usize),
}

impl CliError {
    pub fn invalid(field: &str, source: copula_forge::Error) -> Self {
        CliError::Invalid {
            field: field.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Invalid { .. } => 2,
            CliError::Run(_) => 3,
            CliError::Io(_) | CliError::PropertiesFailed(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
