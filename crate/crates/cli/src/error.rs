use kinetic_core::KineticError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config: {0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] KineticError),
}

impl CliError {
    /// 2 for infeasibility reports, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(KineticError::Infeasible(_)) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
