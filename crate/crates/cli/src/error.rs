use std::fmt;
use std::path::PathBuf;

/// Syntax or validation problem in a scenario document.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub line: Option<usize>,
    pub message: String,
}

impl ScenarioError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("scenario: {0}")]
    Scenario(#[from] ScenarioError),

    #[error("{context}: {source}")]
    Engine {
        context: String,
        source: homdip_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn engine(context: impl Into<String>) -> impl FnOnce(homdip_core::Error) -> Self {
        let context = context.into();
        move |source| CliError::Engine { context, source }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 2 for invalid input, 3 for a numerical failure, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        use homdip_core::Error as E;
        match self {
            CliError::Scenario(_) => 2,
            CliError::Engine { source, .. } => match source {
                E::Contract(_) | E::Aliasing { .. } | E::Svd(_) | E::Degenerate(_) => 3,
                E::InvalidRange(_)
                | E::InvalidParameter { .. }
                | E::GridMismatch(_)
                | E::AsymmetricGrid { .. }
                | E::PhotonNumber(_)
                | E::EtaOutOfRange(_)
                | E::Parse { .. } => 2,
            },
            CliError::Io { .. } => 1,
        }
    }
}
