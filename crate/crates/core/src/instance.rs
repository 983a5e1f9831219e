//! Set-covering and minimum-knapsack instances.
//!
//! Indices are 0-based throughout the library. The `from_one_based`
//! constructors and the JSON layer in [`crate::io`] translate from the
//! 1-based convention used in instance files.

use crate::error::{Error, Result};

/// A set-covering system `Ax >= e` over binary `x`, stored as the supports of its rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl CoverInstance {
    /// Validates and stores the rows. Each support is sorted ascending; the
    /// ascending order is the branching order used by the level formulations.
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let mut row = row;
            row.sort_unstable();
            let len = row.len();
            row.dedup();
            if row.len() != len {
                return Err(Error::InvalidInstance(format!("row {} repeats a variable", i + 1)));
            }
            if row.len() < 2 {
                return Err(Error::InvalidInstance(format!("row {} has fewer than two variables", i + 1)));
            }
            if let Some(&j) = row.iter().find(|&&j| j >= n) {
                return Err(Error::InvalidInstance(format!("row {} references variable {} of {}", i + 1, j + 1, n)));
            }
            sorted.push(row);
        }
        for a in 0..sorted.len() {
            for b in 0..sorted.len() {
                if a != b && is_subset(&sorted[a], &sorted[b]) {
                    return Err(Error::InvalidInstance(format!(
                        "support of row {} is contained in row {}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(CoverInstance { n, rows: sorted })
    }

    pub fn from_one_based(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&j| j.checked_sub(1).ok_or_else(|| Error::InvalidInstance("index 0 in 1-based row".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Whether the binary point given as a bitmask (bit `j` is `x_j`) covers every row.
    pub fn covers_mask(&self, mask: u64) -> bool {
        self.rows.iter().all(|r| r.iter().any(|&j| mask >> j & 1 == 1))
    }

    pub fn covers(&self, x: &[bool]) -> bool {
        self.rows.iter().all(|r| r.iter().any(|&j| x[j]))
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|j| b.binary_search(j).is_ok())
}

/// A minimum-knapsack set `{x binary : sum_j w_j x_j >= w_0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    weights: Vec<u64>,
    rhs: u64,
}

impl KnapsackInstance {
    /// Requires at least one item, positive weights, a positive threshold and
    /// `w_j <= w_0` for every item.
    pub fn new(weights: Vec<u64>, rhs: u64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInstance("knapsack needs at least one item".into()));
        }
        if rhs == 0 {
            return Err(Error::InvalidInstance("threshold must be positive".into()));
        }
        for (j, &w) in weights.iter().enumerate() {
            if w == 0 {
                return Err(Error::InvalidInstance(format!("weight of item {} is zero", j + 1)));
            }
            if w > rhs {
                return Err(Error::InvalidInstance(format!(
                    "weight of item {} exceeds the threshold ({w} > {rhs})",
                    j + 1
                )));
            }
        }
        Ok(KnapsackInstance { weights, rhs })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, j: usize) -> u64 {
        self.weights[j]
    }

    pub fn rhs(&self) -> u64 {
        self.rhs
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn is_feasible_mask(&self, mask: u64) -> bool {
        let w: u64 = (0..self.n()).filter(|&j| mask >> j & 1 == 1).map(|j| self.weights[j]).sum();
        w >= self.rhs
    }
}
