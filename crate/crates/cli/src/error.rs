use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config{}: {msg}", at_line(*.line))]
    Config { line: usize, msg: String },

    #[error("cannot read {}: {source}", .path.display())]
    Input { path: PathBuf, source: std::io::Error },

    #[error("cannot write {}: {source}", .path.display())]
    Output { path: PathBuf, source: std::io::Error },

    #[error("check failed: {0}")]
    Check(String),

    #[error(transparent)]
    Core(#[from] cql_core::Error),

    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn at_line(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" line {line}")
    }
}

impl CliError {
    pub fn config(line: usize, msg: impl Into<String>) -> Self {
        CliError::Config { line, msg: msg.into() }
    }

    /// 1 for numerical failures, 2 for anything the user can fix in the input.
    pub fn exit_code(&self) -> i32 {
        use cql_core::Error as E;
        match self {
            CliError::Check(_) | CliError::Output { .. } => 1,
            CliError::Core(E::NoConvergence { .. } | E::Divergent(_) | E::FitQuality(_)) => 1,
            _ => 2,
        }
    }
}
