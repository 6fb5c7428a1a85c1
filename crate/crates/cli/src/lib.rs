//! Problem files, runs and output files for the `canonfs` command.

mod problem_file;
mod run;

pub use problem_file::{parse_problem, print_problem};
pub use run::{
    run, solve, write_outputs, ElementSummary, OracleSummary, Report, RunConfig, Summary,
};

/// Failures surfaced by the command, each rendered on one line.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("problem file not found: {0}")]
    NotFound(String),

    #[error("syntax error at line {line} column {column}: {reason}")]
    Syntax {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("invalid problem at {path}: {reason}")]
    Validation { path: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {reason}")]
    Io { path: String, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(#[from] canonfs::Error),
}

impl CliError {
    /// Process exit code: 1 numerical, 2 input, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::NotFound(_)
            | CliError::Syntax { .. }
            | CliError::Validation { .. }
            | CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}
