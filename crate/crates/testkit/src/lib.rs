//! Independent oracles and random generators shared by the test suites.
//!
//! Nothing here reuses the solver code paths it checks: the bounded model
//! is brute force over a small integer range and the polyhedral oracle is a
//! dense Fourier–Motzkin elimination without any LP. The one exception is
//! [`compare`], which matches clauses up to renaming with the library's own
//! polyhedra. [`suites`] bundles the seeded property checks built on them.

pub mod bounded;
pub mod compare;
pub mod fm;
pub mod gen;
pub mod ground;
pub mod suites;

pub use bounded::{bounded_least_model, derives_false};
pub use compare::same_clause;
pub use fm::DenseSystem;
pub use gen::{random_constraint, random_system, SystemShape};
pub use ground::ground_instances;
