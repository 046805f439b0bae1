use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] vortexprop::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown figure id {id:?}, expected one of {}", crate::figure::FIGURE_IDS.join(", "))]
    UnknownFigure { id: String },
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 4 for resource caps.
    pub fn exit_code(&self) -> u8 {
        use vortexprop::Error as E;
        match self {
            CliError::Config(_)
            | CliError::UnknownFigure { .. }
            | CliError::Core(E::InvalidParameter(_)) => 2,
            CliError::Core(E::MemoryBudgetExceeded { .. }) => 4,
            CliError::Core(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
