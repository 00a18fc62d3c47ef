//! Constrained Horn clauses: syntax, normalization, parsing and emission.

pub mod clause;
pub mod normalize;
pub mod parse;
pub mod print;
pub mod smtlib;
pub mod system;

pub use clause::{Atom, Clause, Head, VarInfo};
pub use normalize::{is_normalized, normalize_clause};
pub use parse::{parse_clp, parse_surface, split_disequalities, SurfaceClause, SurfaceSystem};
pub use print::{clause_to_string, system_to_string};
pub use smtlib::emit_smtlib;
pub use system::ChcSystem;
