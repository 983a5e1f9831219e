//! Bounded-pitch relaxations for set covering and near-separation of
//! bounded-coefficient inequalities for minimum-knapsack sets.
//!
//! * [`setcover`] builds the recursive level-`pi` disjunctive formulation whose
//!   projection satisfies every valid inequality of pitch at most `pi`.
//! * [`minknap`] separates a fractional point from the valid inequalities with
//!   coefficients in `{0, ..., p}`, within an additive tolerance.
//!
//! All arithmetic is exact ([`Rational`]); [`oracle`] holds brute-force
//! checks used to cross-validate both halves on small instances.

pub mod error;
pub mod inequality;
pub mod instance;
pub mod io;
pub mod lp;
pub mod minknap;
pub mod oracle;
pub mod rational;
pub mod setcover;

pub use error::{Error, Result};
pub use inequality::{dominates, evaluate, pitch, Dominance, FractionalPoint, Inequality};
pub use instance::{CoverInstance, KnapsackInstance};
pub use oracle::cover_threshold;
pub use rational::Rational;
