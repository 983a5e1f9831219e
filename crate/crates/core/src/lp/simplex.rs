//! Exact-rational bounded-variable primal simplex.
//!
//! The tableau is kept as sparse rows over the nonbasic columns. Every
//! inequality row gets a slack column; rows whose slack cannot start basic
//! get an artificial column, and phase 1 minimizes the artificials. Entering
//! columns are priced by largest reduced cost until a run of degenerate
//! pivots is seen, after which Bland's smallest-index rule takes over until
//! the objective strictly improves again, so the method cannot cycle.

use crate::lp::system::{LinearSystem, Sense, VarId};
use crate::rational::Rational;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const BLAND_AFTER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimplexStats {
    pub pivots: usize,
    pub bound_flips: usize,
    pub degenerate: usize,
}

type SparseRow = Vec<(usize, Rational)>;

/// Simplex working state for one system. After the first solve the basis is
/// kept, so later objectives are re-optimized from a feasible warm start.
pub struct Simplex {
    nstruct: usize,
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
    value: Vec<Rational>,
    artificial: Vec<bool>,
    basic_row: Vec<Option<usize>>,
    basis: Vec<usize>,
    rows: Vec<SparseRow>,
    feasible: Option<bool>,
    stats: SimplexStats,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Simplex {
    pub fn new(sys: &LinearSystem) -> Self {
        Self::with_fixings(sys, &[])
    }

    /// Like [`Simplex::new`] but with some structural variables fixed to given
    /// values. A fixing outside the variable's bounds makes the system infeasible.
    pub fn with_fixings(sys: &LinearSystem, fixings: &[(VarId, Rational)]) -> Self {
        let nstruct = sys.num_vars();
        let mut lower: Vec<Rational> = sys.vars().iter().map(|v| v.lower.clone()).collect();
        let mut upper: Vec<Option<Rational>> = sys.vars().iter().map(|v| Some(v.upper.clone())).collect();
        let mut out_of_bounds = false;
        for (v, x) in fixings {
            out_of_bounds |= *x < lower[*v] || Some(x) > upper[*v].as_ref();
            lower[*v] = x.clone();
            upper[*v] = Some(x.clone());
        }
        let mut value = lower.clone();
        let mut artificial = vec![false; nstruct];
        let mut basis = Vec::with_capacity(sys.num_constraints());
        let mut rows = Vec::with_capacity(sys.num_constraints());

        let new_col = |lower: &mut Vec<Rational>,
                           upper: &mut Vec<Option<Rational>>,
                           value: &mut Vec<Rational>,
                           artificial: &mut Vec<bool>,
                           is_art: bool,
                           v: Rational| {
            lower.push(Rational::zero());
            upper.push(None);
            value.push(v);
            artificial.push(is_art);
            lower.len() - 1
        };

        for c in sys.constraints() {
            let act = c.activity(&value[..nstruct]);
            let resid = &c.rhs - &act;
            let a: SparseRow = c.terms().to_vec();
            let neg = |r: &SparseRow| r.iter().map(|(k, v)| (*k, -v)).collect::<SparseRow>();
            match c.sense {
                Sense::Ge if !resid.is_positive() => {
                    // s = a.x - b basic
                    let s = new_col(&mut lower, &mut upper, &mut value, &mut artificial, false, -resid);
                    basis.push(s);
                    rows.push(neg(&a));
                }
                Sense::Le if !resid.is_negative() => {
                    let s = new_col(&mut lower, &mut upper, &mut value, &mut artificial, false, resid);
                    basis.push(s);
                    rows.push(a);
                }
                Sense::Ge => {
                    // a.x - s + t = b, t = b - a.x + s
                    let s = new_col(&mut lower, &mut upper, &mut value, &mut artificial, false, Rational::zero());
                    let t = new_col(&mut lower, &mut upper, &mut value, &mut artificial, true, resid);
                    let mut r = a;
                    r.push((s, -Rational::one()));
                    basis.push(t);
                    rows.push(r);
                }
                Sense::Le => {
                    // a.x + s - t = b, t = a.x + s - b
                    let s = new_col(&mut lower, &mut upper, &mut value, &mut artificial, false, Rational::zero());
                    let t = new_col(&mut lower, &mut upper, &mut value, &mut artificial, true, -resid);
                    let mut r = neg(&a);
                    r.push((s, -Rational::one()));
                    basis.push(t);
                    rows.push(r);
                }
                Sense::Eq => {
                    let flip = resid.is_negative();
                    let t = new_col(&mut lower, &mut upper, &mut value, &mut artificial, true, resid.abs());
                    basis.push(t);
                    rows.push(if flip { neg(&a) } else { a });
                }
            }
        }

        let ncols = lower.len();
        let mut basic_row = vec![None; ncols];
        for (r, &b) in basis.iter().enumerate() {
            basic_row[b] = Some(r);
        }
        Simplex {
            nstruct,
            lower,
            upper,
            value,
            artificial,
            basic_row,
            basis,
            rows,
            feasible: if out_of_bounds { Some(false) } else { None },
            stats: SimplexStats::default(),
        }
    }

    pub fn stats(&self) -> SimplexStats {
        self.stats
    }

    fn ncols(&self) -> usize {
        self.lower.len()
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j].as_ref() == Some(&self.lower[j])
    }

    /// Phase 1; returns whether the system is feasible.
    pub fn find_feasible(&mut self) -> bool {
        if let Some(f) = self.feasible {
            return f;
        }
        let cost: Vec<Rational> =
            self.artificial.iter().map(|&a| if a { Rational::one() } else { Rational::zero() }).collect();
        // the artificial objective is bounded below by zero
        let _ = self.optimize(&cost);
        let infeasibility: Rational =
            (0..self.ncols()).filter(|&j| self.artificial[j]).map(|j| &self.value[j]).sum();
        let feasible = infeasibility.is_zero();
        if feasible {
            for j in 0..self.ncols() {
                if self.artificial[j] {
                    self.upper[j] = Some(Rational::zero());
                }
            }
            self.drive_out_artificials();
        }
        self.feasible = Some(feasible);
        feasible
    }

    /// Values of the structural variables at the current basis.
    pub fn point(&self) -> Vec<Rational> {
        self.value[..self.nstruct].to_vec()
    }

    /// Minimizes a sparse objective over the structural variables.
    pub fn minimize(&mut self, objective: &[(VarId, Rational)]) -> LpOutcome {
        if !self.find_feasible() {
            return LpOutcome::Infeasible;
        }
        let mut cost = vec![Rational::zero(); self.ncols()];
        for (v, c) in objective {
            cost[*v] += c;
        }
        match self.optimize(&cost) {
            Step::Unbounded => LpOutcome::Unbounded,
            Step::Optimal => {
                let value = objective.iter().map(|(v, c)| c * &self.value[*v]).sum();
                LpOutcome::Optimal { value, point: self.point() }
            }
        }
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in &self.rows[r] {
                d[*k] -= cb * v;
            }
        }
        for &b in &self.basis {
            d[b] = Rational::zero();
        }
        d
    }

    fn column(&self, j: usize) -> Vec<(usize, Rational)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                row.binary_search_by_key(&j, |(k, _)| *k).ok().map(|pos| (r, row[pos].1.clone()))
            })
            .collect()
    }

    fn choose_entering(&self, d: &[Rational], bland: bool) -> Option<(usize, bool)> {
        let mut best: Option<(usize, bool)> = None;
        let mut best_mag = Rational::zero();
        for (j, dj) in d.iter().enumerate() {
            if dj.is_zero() || self.basic_row[j].is_some() || self.is_fixed(j) {
                continue;
            }
            let increase = if dj.is_negative() {
                if self.upper[j].as_ref().is_some_and(|u| self.value[j] >= *u) {
                    continue;
                }
                true
            } else {
                if self.value[j] <= self.lower[j] {
                    continue;
                }
                false
            };
            if bland {
                return Some((j, increase));
            }
            let mag = dj.abs();
            if best.is_none() || mag > best_mag {
                best = Some((j, increase));
                best_mag = mag;
            }
        }
        best
    }

    fn optimize(&mut self, cost: &[Rational]) -> Step {
        let mut d = self.reduced_costs(cost);
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= BLAND_AFTER;
            let Some((j, increase)) = self.choose_entering(&d, bland) else {
                return Step::Optimal;
            };
            let col = self.column(j);

            // ratio test; `None` leaving row means a bound flip of the entering column
            let mut step: Option<Rational> =
                self.upper[j].as_ref().map(|u| u - &self.lower[j]);
            let mut leave: Option<usize> = None;
            for (r, t) in &col {
                let b = self.basis[*r];
                let rate_negative = t.is_positive() == increase;
                let limit = if rate_negative {
                    (&self.value[b] - &self.lower[b]) / t.abs()
                } else {
                    match &self.upper[b] {
                        Some(u) => (u - &self.value[b]) / t.abs(),
                        None => continue,
                    }
                };
                let better = match &step {
                    None => true,
                    Some(s) => {
                        limit < *s || (limit == *s && leave.is_some_and(|lr| b < self.basis[lr]))
                    }
                };
                if better {
                    step = Some(limit);
                    leave = Some(*r);
                }
            }
            let Some(theta) = step else {
                return Step::Unbounded;
            };

            if theta.is_zero() {
                degenerate_run += 1;
                self.stats.degenerate += 1;
            } else {
                degenerate_run = 0;
                let delta = if increase { theta.clone() } else { -&theta };
                self.value[j] += &delta;
                for (r, t) in &col {
                    let b = self.basis[*r];
                    self.value[b] -= t * &delta;
                }
            }

            match leave {
                None => {
                    self.stats.bound_flips += 1;
                }
                Some(r) => {
                    self.pivot(r, j, &col, &mut d);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize, col: &[(usize, Rational)], d: &mut [Rational]) {
        self.stats.pivots += 1;
        let leaving = self.basis[r];
        let old = std::mem::take(&mut self.rows[r]);
        let p = old
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, v)| v.clone())
            .expect("pivot column present in pivot row");
        let pinv = p.recip();
        let mut new_row: SparseRow = old.into_iter().filter(|(k, _)| *k != j).map(|(k, v)| (k, v * &pinv)).collect();
        if self.artificial[leaving] {
            // an artificial that leaves the basis is never needed again
            self.upper[leaving] = Some(Rational::zero());
        } else {
            let pos = new_row.partition_point(|(k, _)| *k < leaving);
            new_row.insert(pos, (leaving, pinv));
        }

        for (i, t) in col {
            if *i == r {
                continue;
            }
            let row = std::mem::take(&mut self.rows[*i]);
            self.rows[*i] = axpy_without(&row, j, &-t, &new_row);
        }

        let dj = std::mem::take(&mut d[j]);
        if !dj.is_zero() {
            for (k, v) in &new_row {
                d[*k] -= &dj * v;
            }
        }
        self.rows[r] = new_row;
        self.basis[r] = j;
        self.basic_row[j] = Some(r);
        self.basic_row[leaving] = None;
    }

    /// Pivots zero-valued basic artificials out wherever the row still has a
    /// structural or slack entry; rows without one are redundant.
    fn drive_out_artificials(&mut self) {
        let mut d = vec![Rational::zero(); self.ncols()];
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if !self.artificial[b] {
                continue;
            }
            let Some((k, _)) = self.rows[r].iter().find(|(k, _)| !self.artificial[*k]).cloned() else {
                continue;
            };
            let col = self.column(k);
            self.pivot(r, k, &col, &mut d);
        }
    }
}

/// `row - j` plus `scale * other`, merged by column.
fn axpy_without(row: &SparseRow, j: usize, scale: &Rational, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let mut a = row.iter().filter(|(k, _)| *k != j).peekable();
    let mut b = other.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some((ka, va)), Some((kb, vb))) => {
                if ka < kb {
                    out.push((*ka, va.clone()));
                    a.next();
                } else if kb < ka {
                    out.push((*kb, scale * vb));
                    b.next();
                } else {
                    let v = va + &(scale * vb);
                    if !v.is_zero() {
                        out.push((*ka, v));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some((ka, va)), None) => {
                out.push((*ka, va.clone()));
                a.next();
            }
            (None, Some((kb, vb))) => {
                out.push((*kb, scale * vb));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

/// Exact minimum of a sparse objective over the LP relaxation of `sys`.
pub fn solve_min(sys: &LinearSystem, objective: &[(VarId, Rational)]) -> LpOutcome {
    Simplex::new(sys).minimize(objective)
}

/// Result of a projection membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// A full assignment extending the point.
    Member(Vec<Rational>),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Whether `x` (values for the variables `originals`) extends to a feasible
/// point of the whole system.
pub fn check_membership(sys: &LinearSystem, originals: &[VarId], x: &[Rational]) -> Membership {
    assert_eq!(originals.len(), x.len(), "point dimension");
    let fixings: Vec<(VarId, Rational)> = originals.iter().copied().zip(x.iter().cloned()).collect();
    let mut simplex = Simplex::with_fixings(sys, &fixings);
    if simplex.find_feasible() {
        Membership::Member(simplex.point())
    } else {
        Membership::NotMember
    }
}
