//! The per-type separation knapsack: given a candidate type, find the
//! cheapest support (under the objective `sum_i i y(S_i)`) of a valid
//! inequality of that type.

use serde::{Deserialize, Serialize};

use super::types::{signature, IneqType};
use crate::error::{Error, Result};
use crate::inequality::Inequality;
use crate::instance::KnapsackInstance;
use crate::oracle::cover_threshold;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepClass {
    pub coeff: usize,
    /// `M_i`; `None` stands for `+inf`.
    pub ceiling: Option<u64>,
    pub forbidden: Vec<usize>,
    pub range: Vec<usize>,
    /// `V_i = R_i + L_i`.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepProblem {
    pub q: usize,
    pub classes: Vec<SepClass>,
    pub fixed_one: Vec<usize>,
    pub fixed_zero: Vec<usize>,
    pub signature: u64,
    pub threshold: i64,
    /// Coefficient of each item in the objective (0 outside every `V_i`).
    pub coeff_of: Vec<usize>,
}

impl SepProblem {
    /// Items neither fixed to one nor to zero.
    pub fn free_items(&self) -> Vec<usize> {
        (0..self.coeff_of.len())
            .filter(|&j| self.coeff_of[j] > 0 && self.fixed_one.binary_search(&j).is_err())
            .collect()
    }

    /// `false` when some item is fixed both ways, so no `z` exists.
    pub fn is_consistent(&self) -> bool {
        self.fixed_one.iter().all(|j| self.fixed_zero.binary_search(j).is_err())
    }

    pub fn is_feasible(&self, k: &KnapsackInstance, z: &[bool]) -> bool {
        z.len() == k.n()
            && self.fixed_one.iter().all(|&j| z[j])
            && self.fixed_zero.iter().all(|&j| !z[j])
            && (0..k.n()).filter(|&j| z[j]).map(|j| k.weight(j) as i64).sum::<i64>() >= self.threshold
    }

    /// `sum_i i sum_{j in V_i} y_j z_j`.
    pub fn objective(&self, y: &[Rational], z: &[bool]) -> Rational {
        (0..z.len()).filter(|&j| z[j] && self.coeff_of[j] > 0).map(|j| Rational::from(self.coeff_of[j]) * &y[j]).sum()
    }

    fn fixed_weight(&self, k: &KnapsackInstance) -> i64 {
        self.fixed_one.iter().map(|&j| k.weight(j) as i64).sum()
    }
}

pub fn build_sep_problem(k: &KnapsackInstance, tau: &IneqType) -> Result<SepProblem> {
    let n = k.n();
    let in_range = |j: usize| if j < n { Ok(()) } else { Err(Error::DimensionMismatch { expected: n, found: j + 1 }) };
    for c in &tau.classes {
        in_range(c.lightest)?;
        c.heavy.iter().try_for_each(|&j| in_range(j))?;
    }
    let w = |j: usize| k.weight(j);
    let mut classes = Vec::new();
    let mut coeff_of = vec![0usize; n];
    for (pos, c) in tau.classes.iter().enumerate() {
        let heavy_min = c.heavy.iter().map(|&h| w(h)).min();
        let later_min = tau.classes[pos + 1..].iter().map(|l| w(l.lightest)).min().map(|v| v.saturating_sub(1));
        let ceiling = match (heavy_min, later_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut forbidden: Vec<usize> = tau
            .classes
            .iter()
            .filter(|o| o.coeff != c.coeff)
            .flat_map(|o| o.heavy.iter().copied().chain([o.lightest]))
            .collect();
        forbidden.sort_unstable();
        forbidden.dedup();
        let range: Vec<usize> = if c.heavy.len() + 1 >= tau.q {
            (0..n)
                .filter(|&j| forbidden.binary_search(&j).is_err())
                .filter(|&j| w(j) >= w(c.lightest) && ceiling.is_none_or(|m| w(j) <= m))
                .collect()
        } else {
            Vec::new()
        };
        let mut members: Vec<usize> = range.iter().chain(&c.heavy).copied().collect();
        members.sort_unstable();
        members.dedup();
        for &j in &members {
            if coeff_of[j] != 0 {
                return Err(Error::Precondition(format!("x{} lies in two classes", j + 1)));
            }
            coeff_of[j] = c.coeff;
        }
        classes.push(SepClass { coeff: c.coeff, ceiling, forbidden, range, members });
    }
    let mut fixed_one: Vec<usize> = tau.classes.iter().flat_map(|c| c.heavy.iter().copied().chain([c.lightest])).collect();
    fixed_one.sort_unstable();
    fixed_one.dedup();
    let fixed_zero: Vec<usize> = (0..n).filter(|&j| coeff_of[j] == 0).collect();
    let sig = signature(k, tau);
    Ok(SepProblem {
        q: tau.q,
        classes,
        fixed_one,
        fixed_zero,
        signature: sig,
        threshold: sig as i64 + cover_threshold(k),
        coeff_of,
    })
}

/// A feasible `z` and its integer-scaled objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SepSolution {
    pub z: Vec<bool>,
    pub value: u64,
}

/// Exact minimizer of `sum_j cost_j z_j` over the feasible `z` of `prob`, by
/// dynamic programming over the objective value: `best[v]` is the largest
/// weight reachable by free items of total cost exactly `v`. With `limit`,
/// only values below it are explored and `None` also means "no value below
/// the limit".
pub fn solve_sep_knapsack(k: &KnapsackInstance, prob: &SepProblem, cost: &[u64], limit: Option<u64>) -> Option<SepSolution> {
    if !prob.is_consistent() {
        return None;
    }
    let mut z = vec![false; k.n()];
    let mut base_cost = 0u64;
    let mut weight = prob.fixed_weight(k);
    for &j in &prob.fixed_one {
        z[j] = true;
        base_cost += cost[j];
    }
    // free items of cost zero can only help
    let mut items = Vec::new();
    for j in prob.free_items() {
        if cost[j] == 0 {
            z[j] = true;
            weight += k.weight(j) as i64;
        } else {
            items.push(j);
        }
    }
    let top = items.iter().map(|&j| cost[j]).sum::<u64>();
    let top = match limit {
        Some(l) if l <= base_cost => return None,
        Some(l) => top.min(l - base_cost - 1),
        None => top,
    } as usize;
    let need = prob.threshold - weight;
    const NONE: i64 = -1;
    let mut best = vec![NONE; top + 1];
    best[0] = 0;
    let mut take = vec![vec![false; top + 1]; items.len()];
    for (row, &j) in items.iter().enumerate() {
        let (c, wj) = (cost[j] as usize, k.weight(j) as i64);
        for v in (c..=top).rev() {
            if best[v - c] != NONE && best[v - c] + wj > best[v] {
                best[v] = best[v - c] + wj;
                take[row][v] = true;
            }
        }
    }
    let v = (0..=top).find(|&v| best[v] != NONE && best[v] >= need)?;
    let mut rest = v;
    for row in (0..items.len()).rev() {
        if take[row][rest] {
            z[items[row]] = true;
            rest -= cost[items[row]] as usize;
        }
    }
    debug_assert_eq!(rest, 0);
    Some(SepSolution { z, value: base_cost + v as u64 })
}

/// The same minimum as [`solve_sep_knapsack`], by dynamic programming over
/// the weight still missing (capped at the threshold). Used where the value
/// range is large but weights are small.
pub fn solve_sep_knapsack_by_weight(k: &KnapsackInstance, prob: &SepProblem, cost: &[u64]) -> Option<SepSolution> {
    if !prob.is_consistent() {
        return None;
    }
    let mut z = vec![false; k.n()];
    let mut value = 0u64;
    for &j in &prob.fixed_one {
        z[j] = true;
        value += cost[j];
    }
    let items = prob.free_items();
    let need = (prob.threshold - prob.fixed_weight(k)).max(0) as usize;
    // best[r]: least cost reaching at least r more weight (r capped at need)
    let mut best: Vec<Option<u64>> = vec![None; need + 1];
    best[0] = Some(0);
    let mut take = vec![vec![false; need + 1]; items.len()];
    for (row, &j) in items.iter().enumerate() {
        let wj = k.weight(j) as usize;
        for r in (1..=need).rev() {
            let from = r.saturating_sub(wj);
            if let Some(b) = best[from] {
                let cand = b + cost[j];
                if best[r].is_none_or(|cur| cand < cur) {
                    best[r] = Some(cand);
                    take[row][r] = true;
                }
            }
        }
    }
    let extra = best[need]?;
    let mut r = need;
    for row in (0..items.len()).rev() {
        if r > 0 && take[row][r] {
            z[items[row]] = true;
            r = r.saturating_sub(k.weight(items[row]) as usize);
        }
    }
    Some(SepSolution { z, value: value + extra })
}

/// `G = max{q n^2, ceil(q n / eps)}`.
pub fn grid(q: usize, n: usize, epsilon: &Rational) -> Result<u64> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        return Err(Error::Precondition(format!("epsilon = {epsilon} must lie in (0,1)")));
    }
    let qn = Rational::from(q * n);
    let fine = (qn / epsilon).ceil();
    let fine = u64::try_from(fine).map_err(|_| Error::Precondition("grid denominator overflows".into()))?;
    Ok(((q * n * n) as u64).max(fine).max(1))
}

/// `ceil(G y_j) / G`, clamped to 1.
pub fn round_point(y: &[Rational], g: u64) -> Vec<Rational> {
    let g = g.max(1);
    y.iter().map(|v| Rational::from_bigints(scaled_up(v, g).into(), g.into())).collect()
}

/// `min(ceil(G y_j), G)` as an integer.
fn scaled_up(v: &Rational, g: u64) -> u64 {
    let up = (v * &Rational::from(g)).ceil();
    u64::try_from(up).unwrap_or(g).min(g)
}

/// Integer costs `i * G * yhat_j` of the rounded objective.
pub fn rounded_costs(prob: &SepProblem, y: &[Rational], g: u64) -> Vec<u64> {
    y.iter().zip(&prob.coeff_of).map(|(v, &i)| i as u64 * scaled_up(v, g)).collect()
}

/// `Omega(yhat, tau)` for `yhat = round_point(y, G)`, with the minimizing `z`;
/// `None` when no feasible `z` exists.
pub fn omega_solution(k: &KnapsackInstance, tau: &IneqType, y: &[Rational], g: u64) -> Result<Option<(Rational, Vec<bool>)>> {
    if y.len() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), found: y.len() });
    }
    let prob = build_sep_problem(k, tau)?;
    let cost = rounded_costs(&prob, y, g);
    Ok(solve_sep_knapsack(k, &prob, &cost, None).map(|s| (Rational::new(s.value as i64, g as i64), s.z)))
}

pub fn omega(k: &KnapsackInstance, tau: &IneqType, y: &[Rational], g: u64) -> Result<Option<Rational>> {
    Ok(omega_solution(k, tau, y, g)?.map(|(v, _)| v))
}

/// `sum_i i x(V_i and z) >= q`.
pub fn extract_inequality(k: &KnapsackInstance, tau: &IneqType, z: &[bool]) -> Result<Inequality> {
    let prob = build_sep_problem(k, tau)?;
    if !prob.is_feasible(k, z) {
        return Err(Error::Precondition("z is not feasible for the separation problem".into()));
    }
    Ok(extract_from(&prob, z))
}

pub(crate) fn extract_from(prob: &SepProblem, z: &[bool]) -> Inequality {
    let coeffs: Vec<i64> = (0..z.len()).map(|j| if z[j] { prob.coeff_of[j] as i64 } else { 0 }).collect();
    Inequality::from_ints(&coeffs, prob.q as i64)
}
