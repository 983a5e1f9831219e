//! Sparse linear systems, an exact simplex over them, and LP-file export.

mod export;
mod simplex;
mod system;

pub use export::{export_lp, parse_lp, ExportOptions};
pub use simplex::{check_membership, solve_min, LpOutcome, Membership, Simplex, SimplexStats};
pub use system::{Constraint, LinearSystem, Sense, SizeReport, VarId, Variable};
