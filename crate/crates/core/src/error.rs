use thiserror::Error;

use crate::domains::DomainTag;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: strict inequality over real-sorted variable {var}")]
    StrictOverReal { line: usize, col: usize, var: String },
    #[error("{line}:{col}: disequality {msg}")]
    Disequality { line: usize, col: usize, msg: String },
    #[error("predicate {pred} used with arity {found}, declared with {expected}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate {0} is not declared")]
    UndeclaredPredicate(String),
    #[error("variable {var} used at both int and real positions")]
    SortConflict { var: String },
    #[error("domain mismatch: {0:?} vs {1:?}")]
    TagMismatch(DomainTag, DomainTag),
    #[error("dimension lists differ")]
    DimsMismatch,
    #[error("variables of the constraint are not covered by the dimensions")]
    DimsNotCovered,
    #[error("projection target is not a subset of the dimensions")]
    NotSubset,
    #[error("Fourier-Motzkin elimination exceeded {cap} constraints")]
    FmBlowup { cap: usize },
    #[error("definition limit of {0} exceeded")]
    DefinitionLimit(usize),
    #[error("strategy timed out after {0:?}")]
    Timeout(std::time::Duration),
    #[error("goal head predicate {0} occurs in the input clauses")]
    GoalPredicateInProgram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
