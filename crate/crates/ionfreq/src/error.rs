use ionfreq_core::Error as ModelError;

/// Failures surfaced by the command line, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Physics(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 2,
            Self::Physics(_) => 3,
            Self::Numerical(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let msg = e.to_string();
        match e {
            ModelError::UnknownSpecies { .. }
            | ModelError::InvalidParameter { .. }
            | ModelError::UnknownScheme(_) => Self::Config(msg),
            ModelError::Unstable { .. }
            | ModelError::InfeasibleDesign(_)
            | ModelError::NotCooling { .. }
            | ModelError::TruncationInadequate { .. }
            | ModelError::UnreachableTarget { .. }
            | ModelError::DivergentBudget { .. } => Self::Physics(msg),
            ModelError::TruncationBreach { .. }
            | ModelError::DimensionMismatch { .. }
            | ModelError::Integration(_) => Self::Numerical(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        Self::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
