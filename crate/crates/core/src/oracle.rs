//! Brute-force validity oracles.
//!
//! Everything here enumerates subsets explicitly and is meant for desk-scale
//! instances. Each oracle takes an explicit size guard and refuses larger
//! inputs.

use crate::error::{Error, Result};
use crate::inequality::{evaluate, FractionalPoint, Inequality};
use crate::instance::{CoverInstance, KnapsackInstance};
use crate::rational::Rational;

pub const DEFAULT_GUARD: usize = 25;

fn check_guard(what: &'static str, size: usize, guard: usize) -> Result<()> {
    if size > guard.min(63) {
        return Err(Error::GuardExceeded { what, size: size as u128, limit: guard.min(63) as u128 });
    }
    Ok(())
}

/// Weight a set of items must reach for its cover inequality to be valid:
/// `sum_j w_j - w_0 + 1`.
pub fn cover_threshold(k: &KnapsackInstance) -> i64 {
    k.total_weight() as i64 - k.rhs() as i64 + 1
}

/// Validity through the cover characterization: for every `C` inside the
/// support with `alpha(C) > sum(alpha) - alpha_0`, `C` must be a cover
/// (`w(C) >= cover_threshold`).
pub fn knap_valid_bruteforce(k: &KnapsackInstance, ineq: &Inequality, guard: usize) -> Result<bool> {
    if ineq.n() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), found: ineq.n() });
    }
    let support = ineq.support();
    check_guard("support size", support.len(), guard)?;
    let slack = ineq.coeff_sum() - ineq.rhs();
    let threshold = cover_threshold(k);
    for mask in 0u64..(1u64 << support.len()) {
        let mut alpha = Rational::zero();
        let mut weight = 0i64;
        for (bit, &j) in support.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                alpha += ineq.coeff(j);
                weight += k.weight(j) as i64;
            }
        }
        if alpha > slack && weight < threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validity by definition: every binary point of the knapsack set satisfies the inequality.
pub fn knap_valid_by_points(k: &KnapsackInstance, ineq: &Inequality, guard: usize) -> Result<bool> {
    if ineq.n() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), found: ineq.n() });
    }
    check_guard("variable count", k.n(), guard)?;
    Ok((0u64..(1u64 << k.n())).filter(|&m| k.is_feasible_mask(m)).all(|m| ineq.lhs_mask(m) >= *ineq.rhs()))
}

/// Validity over the set-covering set: every binary `x` with `Ax >= e` satisfies the inequality.
pub fn cover_valid_bruteforce(a: &CoverInstance, ineq: &Inequality, guard: usize) -> Result<bool> {
    if ineq.n() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: ineq.n() });
    }
    check_guard("variable count", a.n(), guard)?;
    Ok((0u64..(1u64 << a.n())).filter(|&m| a.covers_mask(m)).all(|m| ineq.lhs_mask(m) >= *ineq.rhs()))
}

/// All binary feasible points of a cover instance, as bitmasks.
pub fn cover_points(a: &CoverInstance, guard: usize) -> Result<Vec<u64>> {
    check_guard("variable count", a.n(), guard)?;
    Ok((0u64..(1u64 << a.n())).filter(|&m| a.covers_mask(m)).collect())
}

/// All binary feasible points of a knapsack instance, as bitmasks.
pub fn knapsack_points(k: &KnapsackInstance, guard: usize) -> Result<Vec<u64>> {
    check_guard("variable count", k.n(), guard)?;
    Ok((0u64..(1u64 << k.n())).filter(|&m| k.is_feasible_mask(m)).collect())
}

/// Most violated member of the bounded family: integer `alpha` with entries in
/// `0..=q` and right-hand side `q`, for `q` in `1..=p`, valid for the knapsack
/// set. Returns the inequality with the smallest slack `alpha^T y - q`.
pub fn knap_family_min_slack(
    k: &KnapsackInstance,
    y: &FractionalPoint,
    p: usize,
    guard: usize,
) -> Result<Option<(Inequality, Rational)>> {
    if y.n() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), found: y.n() });
    }
    check_guard("variable count", k.n(), guard)?;
    let points = knapsack_points(k, guard)?;
    let n = k.n();
    let mut best: Option<(Inequality, Rational)> = None;
    for q in 1..=p as i64 {
        let mut alpha = vec![0i64; n];
        loop {
            let valid = points.iter().all(|&m| (0..n).filter(|&j| m >> j & 1 == 1).map(|j| alpha[j]).sum::<i64>() >= q);
            if valid {
                let ineq = Inequality::from_ints(&alpha, q);
                let slack = evaluate(&ineq, y)?;
                if best.as_ref().is_none_or(|(_, s)| slack < *s) {
                    best = Some((ineq, slack));
                }
            }
            let Some(j) = (0..n).find(|&j| alpha[j] < q) else { break };
            alpha[j] += 1;
            alpha[..j].iter_mut().for_each(|a| *a = 0);
        }
    }
    Ok(best)
}
