//! Unfold/fold transformation of constrained Horn clauses guided by
//! abstract domains.

pub mod defs;
pub mod partition;
pub mod strategy;
pub mod unfold;

pub use defs::{Definition, DefsTree};
pub use partition::{partition, PartitionOp};
pub use strategy::{app, asp, run_strategy, transform_system, Outcome, StrategyConfig, UnfoldPolicy};
pub use unfold::{delete_unsat, simplify, unfold, unfold_all, unfold_positions};
