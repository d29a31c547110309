//! Scenario loading and suite execution.

pub mod generate;
pub mod model;
pub mod report;
pub mod runner;
pub mod scenario;

use std::path::Path;

pub use model::{resolve, Model};
pub use report::{Report, Status};
pub use runner::{Overrides, Runner};
pub use scenario::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid scenario:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

impl CliError {
    /// Exit status: 2 for scenarios that cannot be loaded.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub fn parse_scenario(text: &str, path: &str) -> Result<Scenario, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load(path: &Path) -> Result<Model, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    load_str(&text, &shown)
}

pub fn load_str(text: &str, path: &str) -> Result<Model, CliError> {
    resolve(parse_scenario(text, path)?).map_err(CliError::Invalid)
}

/// Process exit status for a finished report: 0 when every check passed.
pub fn report_exit_code(r: &Report) -> i32 {
    if r.passed() {
        0
    } else {
        1
    }
}
