use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sep::{build_sep_problem, extract_from, grid, rounded_costs, solve_sep_knapsack, solve_sep_knapsack_by_weight};
use super::types::{enumerate_types, EnumOptions};
use crate::error::{Error, Result};
use crate::inequality::{evaluate, FractionalPoint, Inequality};
use crate::instance::KnapsackInstance;
use crate::oracle::cover_threshold;
use crate::rational::Rational;

/// Smallest rounded `Omega` seen for one right-hand side `q`; `None` when
/// no candidate type admits a valid inequality or the minimum was not computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaMin {
    pub q: usize,
    pub min: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SeparationResult {
    Violated {
        ineq: Inequality,
        slack: Rational,
    },
    Certified {
        p: usize,
        epsilon: Rational,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        omega: Vec<OmegaMin>,
    },
}

impl SeparationResult {
    pub fn is_violated(&self) -> bool {
        matches!(self, SeparationResult::Violated { .. })
    }

    pub fn cut(&self) -> Option<(&Inequality, &Rational)> {
        match self {
            SeparationResult::Violated { ineq, slack } => Some((ineq, slack)),
            SeparationResult::Certified { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparateOptions {
    /// Overrides `G` for every `q`.
    pub grid: Option<u64>,
    pub enumeration: EnumOptions,
    /// Compute the smallest `Omega` per `q` for certificates (skipped when the
    /// total weight exceeds this bound).
    pub minima_weight_limit: u64,
}

impl Default for SeparateOptions {
    fn default() -> Self {
        SeparateOptions { grid: None, enumeration: EnumOptions::default(), minima_weight_limit: 1_000_000 }
    }
}

fn check_point(k: &KnapsackInstance, y: &FractionalPoint) -> Result<()> {
    if y.n() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), found: y.n() });
    }
    Ok(())
}

/// Near-separation from the valid inequalities with coefficients in
/// `{0..p}`: for `q = 1..p`, every candidate type is solved on the rounded
/// point and the first (in enumeration order) with `Omega < q` yields a cut.
/// A certificate means every such inequality, put in the form
/// `sum_i i x(S_i) >= q`, has slack at least `-epsilon` at `y`.
pub fn separate(k: &KnapsackInstance, y: &FractionalPoint, p: usize, epsilon: &Rational, options: &SeparateOptions) -> Result<SeparationResult> {
    check_point(k, y)?;
    if p == 0 {
        return Err(Error::Precondition("p must be at least 1".into()));
    }
    let n = k.n();
    let mut minima = Vec::new();
    for q in 1..=p {
        let g = match options.grid {
            Some(g) if g >= 1 => g,
            Some(_) => return Err(Error::Precondition("grid must be positive".into())),
            None => grid(q, n, epsilon)?,
        };
        let types = enumerate_types(k, q, &options.enumeration).map_err(|e| match e {
            Error::GuardExceeded { what: _, size, limit } => Error::GuardExceeded { what: guard_label(q), size, limit },
            other => other,
        })?;
        let limit = q as u64 * g;
        let hit = types.par_iter().find_map_first(|tau| {
            let prob = build_sep_problem(k, tau).ok()?;
            let cost = rounded_costs(&prob, y.entries(), g);
            solve_sep_knapsack(k, &prob, &cost, Some(limit)).map(|s| extract_from(&prob, &s.z))
        });
        if let Some(ineq) = hit {
            let slack = evaluate(&ineq, y)?;
            debug_assert!(slack.is_negative());
            return Ok(SeparationResult::Violated { ineq, slack });
        }
        let min = if k.total_weight() <= options.minima_weight_limit {
            types
                .par_iter()
                .filter_map(|tau| {
                    let prob = build_sep_problem(k, tau).ok()?;
                    let cost = rounded_costs(&prob, y.entries(), g);
                    solve_sep_knapsack_by_weight(k, &prob, &cost).map(|s| s.value)
                })
                .min()
                .map(|v| Rational::from(v) / Rational::from(g))
        } else {
            None
        };
        minima.push(OmegaMin { q, min });
    }
    Ok(SeparationResult::Certified { p, epsilon: epsilon.clone(), omega: minima })
}

fn guard_label(q: usize) -> &'static str {
    match q {
        1 => "type candidates at q = 1",
        2 => "type candidates at q = 2",
        3 => "type candidates at q = 3",
        4 => "type candidates at q = 4",
        _ => "type candidates at q >= 5",
    }
}

/// Least total cost of items (excluding `skip`) reaching weight `need`, with
/// the chosen items; exact over rationals.
fn min_cost_cover(k: &KnapsackInstance, cost: &[Rational], need: i64, skip: Option<usize>) -> Option<(Rational, Vec<bool>)> {
    let need = need.max(0) as usize;
    let items: Vec<usize> = (0..k.n()).filter(|&j| Some(j) != skip).collect();
    let mut best: Vec<Option<Rational>> = vec![None; need + 1];
    best[0] = Some(Rational::zero());
    let mut take = vec![vec![false; need + 1]; items.len()];
    for (row, &j) in items.iter().enumerate() {
        let wj = k.weight(j) as usize;
        for r in (1..=need).rev() {
            if let Some(b) = &best[r.saturating_sub(wj)] {
                let cand = b + &cost[j];
                if best[r].as_ref().is_none_or(|cur| cand < *cur) {
                    best[r] = Some(cand);
                    take[row][r] = true;
                }
            }
        }
    }
    let value = best[need].clone()?;
    let mut z = vec![false; k.n()];
    let mut r = need;
    for row in (0..items.len()).rev() {
        if r > 0 && take[row][r] {
            z[items[row]] = true;
            r = r.saturating_sub(k.weight(items[row]) as usize);
        }
    }
    Some((value, z))
}

/// `V(k) = min y_k + sum_{j != k} c_j z_j` with `c_j = y_j` when `w_j <= w_k` and
/// `2 y_j` otherwise, subject to `sum_{j != k} w_j z_j >= sum w - w_0 + 1`;
/// `None` when even all other items fall short.
pub fn p2_value(k: &KnapsackInstance, y: &FractionalPoint, item: usize) -> Result<Option<(Rational, Vec<bool>)>> {
    check_point(k, y)?;
    let wk = k.weight(item);
    let cost: Vec<Rational> = (0..k.n())
        .map(|j| if k.weight(j) <= wk { y.get(j).clone() } else { y.get(j) * &Rational::from(2) })
        .collect();
    Ok(min_cost_cover(k, &cost, cover_threshold(k), Some(item)).map(|(v, mut z)| {
        z[item] = true;
        (v + y.get(item), z)
    }))
}

/// Exact separation from the valid inequalities with coefficients in
/// `{0,1,2}`. Each `V(k)` covers the inequalities whose heaviest
/// coefficient-1 item is `k`; a final pass covers `2 x(S) >= 2`.
pub fn separate_p2(k: &KnapsackInstance, y: &FractionalPoint) -> Result<SeparationResult> {
    check_point(k, y)?;
    let two = Rational::from(2);
    // among equal values the heaviest k has the most coefficient-1 items
    let mut best: Option<(Rational, u64, Inequality)> = None;
    for item in 0..k.n() {
        if let Some((value, z)) = p2_value(k, y, item)? {
            let wk = k.weight(item);
            let better = best.as_ref().is_none_or(|(b, bw, _)| value < *b || (value == *b && wk > *bw));
            if value < two && better {
                let coeffs: Vec<i64> = (0..k.n()).map(|j| if !z[j] { 0 } else if k.weight(j) <= wk { 1 } else { 2 }).collect();
                best = Some((value, wk, Inequality::from_ints(&coeffs, 2)));
            }
        }
    }
    let doubled: Vec<Rational> = y.entries().iter().map(|v| v * &two).collect();
    if let Some((value, z)) = min_cost_cover(k, &doubled, cover_threshold(k), None) {
        if value < two && best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            let coeffs: Vec<i64> = z.iter().map(|&b| if b { 2 } else { 0 }).collect();
            best = Some((value, 0, Inequality::from_ints(&coeffs, 2)));
        }
    }
    Ok(match best {
        Some((_, _, ineq)) => {
            let slack = evaluate(&ineq, y)?;
            SeparationResult::Violated { ineq, slack }
        }
        None => SeparationResult::Certified { p: 2, epsilon: Rational::zero(), omega: Vec::new() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono() -> KnapsackInstance {
        KnapsackInstance::new(vec![10, 10, 5, 6, 7], 10).unwrap()
    }

    fn half_first() -> FractionalPoint {
        FractionalPoint::new(vec![Rational::new(1, 2), Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()]).unwrap()
    }

    #[test]
    fn worked_p2_case() {
        let (v, z) = p2_value(&mono(), &half_first(), 4).unwrap().unwrap();
        assert_eq!(v, Rational::one());
        assert!(z.iter().all(|&b| b));
        let res = separate_p2(&mono(), &half_first()).unwrap();
        let (ineq, slack) = res.cut().unwrap();
        assert_eq!(*slack, Rational::from(-1));
        assert_eq!(*ineq, Inequality::from_ints(&[2, 2, 1, 1, 1], 2));
    }

    #[test]
    fn type_method_on_the_worked_case() {
        let res = separate(&mono(), &half_first(), 2, &Rational::new(1, 100), &SeparateOptions::default()).unwrap();
        let (ineq, slack) = res.cut().unwrap();
        assert!(slack.is_negative());
        assert!(crate::oracle::knap_valid_bruteforce(&mono(), ineq, 25).unwrap());
    }

    #[test]
    fn all_ones_is_certified() {
        let ones = FractionalPoint::ones(5);
        for res in [
            separate(&mono(), &ones, 2, &Rational::new(1, 100), &SeparateOptions::default()).unwrap(),
            separate_p2(&mono(), &ones).unwrap(),
        ] {
            assert!(!res.is_violated());
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(separate_p2(&mono(), &half_first()).unwrap()).unwrap();
        assert_eq!(v["status"], "violated");
        assert_eq!(v["slack"], "-1");
        let c = SeparationResult::Certified { p: 2, epsilon: Rational::new(1, 100), omega: vec![] };
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"status":"certified","p":2,"epsilon":"1/100"}"#);
    }
}
