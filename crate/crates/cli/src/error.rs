use stablereg_core::Error;

/// Process exit codes shared by every command.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const INPUT: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded(_)) => exit::BUDGET,
            CliError::Core(Error::HeuristicFailed(_)) => exit::FAIL,
            _ => exit::INPUT,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }
}
