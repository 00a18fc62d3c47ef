//! Transformation of constrained Horn clauses by predicate pairing and
//! specialization with abstraction over linear-arithmetic domains
//! (Universe, Boxes, Bounded Differences, Octagons, Convex Polyhedra).
//!
//! The usual entry points are [`chc::parse_clp`] to read a clause set,
//! [`transform::app`] / [`transform::asp`] to transform it, and
//! [`chc::emit_smtlib`] to hand the result to a CHC solver.

pub mod chc;
pub mod domains;
pub mod error;
pub mod ext;
pub mod linear;
pub mod lp;
pub mod transform;

pub use error::{Error, Result};
