//! Scenario-driven front end for the Nichols algebra engine.

pub mod expr;
pub mod scenario;
pub mod tasks;
pub mod verify;

use nichols_core::diff::DiffError;
use nichols_core::groupoid::GroupoidError;
use nichols_core::nichols::EngineError;

pub use scenario::{parse_numeration, parse_scenario, Scenario, Task, SPEC_VERSION};
pub use tasks::{run, Outcome, RunOptions};
pub use verify::{verify_paper, VerifyRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// invalid input, located by field path
    #[error("schema: {0}")]
    Schema(String),
    /// a computation the engine declines to certify
    #[error("refused: {0}")]
    Refusal(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Refusal(_) => 2,
            CliError::Schema(_) | CliError::Internal(_) => 1,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> CliError {
        match e {
            EngineError::MemoryGuard { .. } | EngineError::SymmetrizerBudget { .. } => CliError::Refusal(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<DiffError> for CliError {
    fn from(e: DiffError) -> CliError {
        match e {
            DiffError::Engine(inner) => inner.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<GroupoidError> for CliError {
    fn from(e: GroupoidError) -> CliError {
        match e {
            GroupoidError::Uncertified { row, column, cap } => {
                CliError::Refusal(format!("(F_{}) uncertified at cap {cap}: a_{}{} did not stabilize", row + 1, row + 1, column + 1))
            }
            GroupoidError::Engine(inner) => inner.into(),
            GroupoidError::Diff(inner) => inner.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}
