//! Library surface of the command-line harness, kept separate from the
//! binary so integration tests can drive commands in-process.

pub mod commands;
pub mod output;
pub mod spec;

pub use commands::{cmd_benchmark, cmd_diagnose, cmd_fit, cmd_generate, cmd_sweep};
pub use spec::ExperimentSpec;

/// Command failures, split by exit code: config errors exit 2, runtime
/// errors exit 3.
#[derive(Debug)]
pub enum CliError {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e:#}"),
            CliError::Runtime(e) => write!(f, "runtime error: {e:#}"),
        }
    }
}
