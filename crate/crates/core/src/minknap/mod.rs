//! Minimum knapsack: drag sets, inequality types and signatures, and
//! near-separation of valid inequalities with bounded coefficients.

mod drag;
mod sep;
mod separate;
mod types;

pub use drag::{drag, strengthen};
pub use sep::{
    build_sep_problem, extract_inequality, grid, omega, omega_solution, round_point, rounded_costs, solve_sep_knapsack,
    solve_sep_knapsack_by_weight, SepClass, SepProblem, SepSolution,
};
pub use separate::{p2_value, separate, separate_p2, OmegaMin, SeparateOptions, SeparationResult};
pub use types::{check_valid_by_signature, compute_type, enumerate_types, heavy_cap, signature, EnumOptions, IneqType, TypeClass};
