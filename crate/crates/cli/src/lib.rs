//! Pipelines of transformation passes over CHC problem files, an external
//! solver adapter and experiment-table statistics.

pub mod error;
pub mod pipeline;
pub mod solver;
pub mod suite;

pub use error::CliError;
pub use pipeline::{check_trivial_sat, run_pipeline, Pass, PipelineSpec, RunOutput, RunStats, Verdict};
pub use solver::{SolverCommand, SOLVER_ENV};
pub use suite::{aggregate, run_problems, run_suite, SuiteReport, TableRow};
