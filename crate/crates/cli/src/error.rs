//! Errors of the command-line harness.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid pipeline: {0}")]
    Pipeline(String),
    #[error("{}: {source}", path.display())]
    Problem {
        path: PathBuf,
        #[source]
        source: hornpair::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot start solver `{cmd}`: {source}")]
    SolverStart {
        cmd: String,
        #[source]
        source: std::io::Error,
    },
    #[error("empty solver command")]
    EmptySolverCommand,
    #[error("no .clp problems in {}", .0.display())]
    EmptySuite(PathBuf),
    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}
