#![allow(dead_code)]

use std::path::PathBuf;

use pitchcut::{CoverInstance, KnapsackInstance, Rational};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// A random cover instance: every row has at least two members and no row
/// contains another.
pub fn random_cover<R: Rng>(rng: &mut R, n: usize, m: usize, max_row: usize) -> CoverInstance {
    loop {
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for _ in 0..m * 4 {
            if rows.len() == m {
                break;
            }
            let size = rng.gen_range(2..=max_row.min(n));
            let mut row: Vec<usize> = rand::seq::index::sample(rng, n, size).into_vec();
            row.sort_unstable();
            let clash = rows.iter().any(|r| r.iter().all(|j| row.contains(j)) || row.iter().all(|j| r.contains(j)));
            if !clash {
                rows.push(row);
            }
        }
        if !rows.is_empty() {
            return CoverInstance::new(n, rows).unwrap();
        }
    }
}

pub fn random_knapsack<R: Rng>(rng: &mut R, n: usize, max_weight: u64) -> KnapsackInstance {
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    let total: u64 = weights.iter().sum();
    let max = *weights.iter().max().unwrap();
    let rhs = rng.gen_range(max..=total);
    KnapsackInstance::new(weights, rhs).unwrap()
}

/// Entries drawn from `{0, 1/d, ..., 1}` for a random small `d`, with a bias
/// towards 0 and 1.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 => Rational::zero(),
            1 => Rational::one(),
            _ => {
                let d = rng.gen_range(2..=7);
                Rational::new(rng.gen_range(0..=d), d)
            }
        })
        .collect()
}

pub fn random_objective<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::new(rng.gen_range(0..=6), rng.gen_range(1..=4))).collect()
}

use pitchcut::minknap::SepProblem;
use pitchcut::oracle::knapsack_points;
use pitchcut::Inequality;

/// Every `alpha` in `{0..q}^n`, in odometer order.
pub fn coefficient_vectors(n: usize, q: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (q + 1).pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % (q + 1);
                code /= q + 1;
                d
            })
            .collect()
    })
}

fn lhs(alpha: &[i64], mask: u64) -> i64 {
    alpha.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, a)| a).sum()
}

/// All valid `alpha x >= q` with `alpha` in `{0..q}^n`, by enumerating the
/// feasible points.
pub fn valid_family(k: &KnapsackInstance, q: i64) -> Vec<Vec<i64>> {
    let points = knapsack_points(k, 25).unwrap();
    coefficient_vectors(k.n(), q).filter(|a| points.iter().all(|&m| lhs(a, m) >= q)).collect()
}

/// `min (alpha y - q)` over every valid `alpha x >= q` with `q` in `1..=p` and
/// `alpha` in `{0..q}^n`, with a minimizer.
pub fn family_min_slack(k: &KnapsackInstance, y: &[Rational], p: i64) -> (Rational, Inequality) {
    let mut best: Option<(Rational, Inequality)> = None;
    for q in 1..=p {
        for a in valid_family(k, q) {
            let slack: Rational = a.iter().zip(y).map(|(&c, v)| Rational::from(c) * v).sum::<Rational>() - Rational::from(q);
            if best.as_ref().is_none_or(|(b, _)| slack < *b) {
                best = Some((slack, Inequality::from_ints(&a, q)));
            }
        }
    }
    best.expect("the all-q inequality is valid")
}

/// Valid and not dominated by another valid inequality with the same `q`.
pub fn undominated_valid(k: &KnapsackInstance, q: i64) -> Vec<Vec<i64>> {
    let family = valid_family(k, q);
    family
        .iter()
        .filter(|a| !family.iter().any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y)))
        .cloned()
        .collect()
}

/// `min sum_j cost_j z_j` over the feasible `z` of a separation problem, by
/// enumerating all `2^n` vectors; ties keep the first mask.
pub fn exhaustive_min<T: Clone + PartialOrd + std::iter::Sum<T>>(
    k: &KnapsackInstance,
    prob: &SepProblem,
    cost: &[T],
) -> Option<T> {
    let n = k.n();
    let mut best: Option<T> = None;
    for mask in 0u64..(1 << n) {
        let z: Vec<bool> = (0..n).map(|j| mask >> j & 1 == 1).collect();
        if prob.is_feasible(k, &z) {
            let v: T = (0..n).filter(|&j| z[j]).map(|j| cost[j].clone()).sum();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best
}
