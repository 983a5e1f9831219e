//! Set covering: the level formulations, their certification, vector
//! branching and a brute-force enumerator of strongest inequalities.

mod branch;
mod certify;
mod level;
mod strongest;

pub use branch::{vector_branch, BranchDisjunction, Fixing};
pub use certify::{certify_pitch, certify_pitch_with, PitchCertifier};
pub use level::{build_level, lift, lift_point, predict_size, Block, BuildOptions, LevelFormulation, DEFAULT_GUARD_NONZEROS};
pub use strongest::{enumerate_strongest, undominated, StrongInequality, DEFAULT_ENUMERATION_GUARD};
