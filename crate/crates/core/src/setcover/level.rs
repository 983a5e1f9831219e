//! The recursive level-`pi` disjunctive formulation.
//!
//! Level 1 is `Ax >= e` over `x in [0,1]^n`. Level `k+1` is obtained from
//! level `k` by, for every row `i` with support `j_1 < ... < j_s` and every
//! branch `t`, copying all level-`k` variables into a block
//! `(x^{i,t}, y^{i,t})` and adding
//!
//! * `sum_t x^{i,t}_{j_t} = 1`,
//! * `x^{i,t}_{j_h} - x^{i,t}_{j_t} <= 0` for `t <= h <= s`,
//! * `x^{i,t}_{j_h} = 0` for `h < t`,
//! * `y^{i,t}_h - x^{i,t}_{j_t} <= 0` for every copied extended variable,
//! * every level-`k` row homogenized by `x^{i,t}_{j_t}`,
//! * `x = sum_t x^{i,t}`.
//!
//! Variables are named `x<j>` for the originals and
//! `x_L<level>_R<i>_T<t>_<j>` / `y_L<level>_R<i>_T<t>_<h>` for the copies made
//! while building `level`, all 1-based.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::instance::CoverInstance;
use crate::lp::{LinearSystem, Sense, SizeReport, VarId};
use crate::rational::Rational;

pub const DEFAULT_GUARD_NONZEROS: u128 = 200_000;

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Omit the rows `x_{j_t} - x_{j_t} <= 0`, which have no terms.
    pub drop_vacuous_rows: bool,
    /// Refuse to build when the predicted nonzero count exceeds this.
    pub guard_nonzeros: u128,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { drop_vacuous_rows: false, guard_nonzeros: DEFAULT_GUARD_NONZEROS }
    }
}

/// One disjunctive block `(x^{i,t}, y^{i,t})` of the top level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub row: usize,
    pub branch: usize,
    pub x: Range<VarId>,
    pub y: Range<VarId>,
}

impl Block {
    /// The copy of `x_{j_t}` that scales this block.
    pub fn lambda(&self, a: &CoverInstance) -> VarId {
        self.x.start + a.row(self.row)[self.branch]
    }
}

#[derive(Debug, Clone)]
pub struct LevelFormulation {
    instance: CoverInstance,
    level: usize,
    system: LinearSystem,
    blocks: Vec<Block>,
}

impl LevelFormulation {
    pub fn instance(&self) -> &CoverInstance {
        &self.instance
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    /// Ids of the original variables `x_1..x_n` (always the first `n`).
    pub fn original_vars(&self) -> Range<VarId> {
        0..self.instance.n()
    }

    pub fn extended_count(&self) -> usize {
        self.system.num_vars() - self.instance.n()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, row: usize, branch: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.row == row && b.branch == branch)
    }

    pub fn size_report(&self) -> SizeReport {
        self.system.size_report()
    }
}

/// Predicted size of the level-`level` system: exact variable and constraint
/// counts, and an upper bound on the nonzeros (a homogenized row can lose its
/// scaling term to cancellation).
pub fn predict_size(a: &CoverInstance, level: usize, options: &BuildOptions) -> SizeReport {
    assert!(level >= 1);
    let n = a.n() as u128;
    let mut vars = n;
    let mut cons = a.m() as u128;
    let mut nnz = a.nonzeros() as u128;
    for _ in 1..level {
        let ext = vars - n;
        let (mut v2, mut c2, mut z2) = (n, 0u128, 0u128);
        for row in a.rows() {
            let s = row.len() as u128;
            v2 += s * vars;
            c2 += 1 + n + s * (s + ext + cons);
            if options.drop_vacuous_rows {
                c2 -= s;
            }
            z2 += s + n * (s + 1);
            for t in 1..=s {
                z2 += 2 * (s - t) + (t - 1) + 2 * ext + nnz + cons;
            }
        }
        vars = v2;
        cons = c2;
        nnz = z2;
    }
    let clamp = |v: u128| usize::try_from(v).unwrap_or(usize::MAX);
    SizeReport { variables: clamp(vars), constraints: clamp(cons), nonzeros: clamp(nnz) }
}

fn level_one(a: &CoverInstance) -> LinearSystem {
    let mut sys = LinearSystem::new();
    for j in 0..a.n() {
        sys.add_unit_var(format!("x{}", j + 1));
    }
    for row in a.rows() {
        sys.push_row(row.iter().map(|&j| (j, Rational::one())), Sense::Ge, Rational::one());
    }
    sys
}

fn next_level(a: &CoverInstance, prev: &LinearSystem, level: usize, options: &BuildOptions) -> (LinearSystem, Vec<Block>) {
    let n = a.n();
    let ext = prev.num_vars() - n;
    let mut sys = LinearSystem::new();
    for j in 0..n {
        sys.add_unit_var(format!("x{}", j + 1));
    }
    let mut blocks = Vec::new();
    for (i, row) in a.rows().iter().enumerate() {
        for t in 0..row.len() {
            let xs = sys.num_vars();
            for j in 0..n {
                sys.add_unit_var(format!("x_L{level}_R{}_T{}_{}", i + 1, t + 1, j + 1));
            }
            let ys = sys.num_vars();
            for h in 0..ext {
                sys.add_unit_var(format!("y_L{level}_R{}_T{}_{}", i + 1, t + 1, h + 1));
            }
            blocks.push(Block { row: i, branch: t, x: xs..xs + n, y: ys..ys + ext });
        }
    }

    let one = Rational::one;
    let mut block_iter = blocks.iter();
    for (i, row) in a.rows().iter().enumerate() {
        let row_blocks: Vec<&Block> = block_iter.by_ref().take(row.len()).collect();
        debug_assert!(row_blocks.iter().all(|b| b.row == i));
        let lambda = |b: &Block| b.x.start + row[b.branch];

        sys.push_row(row_blocks.iter().map(|b| (lambda(b), one())), Sense::Eq, one());

        for b in &row_blocks {
            let t = b.branch;
            let lam = lambda(b);
            for &jh in &row[t..] {
                if options.drop_vacuous_rows && jh == row[t] {
                    continue;
                }
                sys.push_row([(b.x.start + jh, one()), (lam, -one())], Sense::Le, Rational::zero());
            }
            for &jh in &row[..t] {
                sys.push_row([(b.x.start + jh, one())], Sense::Eq, Rational::zero());
            }
            for y in b.y.clone() {
                sys.push_row([(y, one()), (lam, -one())], Sense::Le, Rational::zero());
            }
            let map = |v: VarId| if v < n { b.x.start + v } else { b.y.start + (v - n) };
            for c in prev.constraints() {
                let terms = c
                    .terms()
                    .iter()
                    .map(|(v, coef)| (map(*v), coef.clone()))
                    .chain(std::iter::once((lam, -&c.rhs)));
                sys.push_row(terms, c.sense, Rational::zero());
            }
        }

        for j in 0..n {
            let terms = std::iter::once((j, one())).chain(row_blocks.iter().map(|b| (b.x.start + j, -one())));
            sys.push_row(terms, Sense::Eq, Rational::zero());
        }
    }
    (sys, blocks)
}

/// Builds the level-`level` formulation of `a`.
pub fn build_level(a: &CoverInstance, level: usize, options: &BuildOptions) -> Result<LevelFormulation> {
    if level == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let predicted = predict_size(a, level, options);
    if predicted.nonzeros as u128 > options.guard_nonzeros {
        return Err(Error::GuardExceeded {
            what: "predicted nonzero count",
            size: predicted.nonzeros as u128,
            limit: options.guard_nonzeros,
        });
    }
    let mut sys = level_one(a);
    let mut blocks = Vec::new();
    for k in 2..=level {
        let (next, b) = next_level(a, &sys, k, options);
        sys = next;
        blocks = b;
    }
    Ok(LevelFormulation { instance: a.clone(), level, system: sys, blocks })
}

fn check_binary_feasible(a: &CoverInstance, x: &[bool]) -> Result<()> {
    if x.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: x.len() });
    }
    if let Some(i) = a.rows().iter().position(|r| r.iter().all(|&j| !x[j])) {
        return Err(Error::Precondition(format!("row {} is not covered", i + 1)));
    }
    Ok(())
}

fn lift_values(a: &CoverInstance, level: usize, x: &[bool]) -> Vec<Rational> {
    let as_rat = |b: bool| if b { Rational::one() } else { Rational::zero() };
    let mut values: Vec<Rational> = x.iter().map(|&b| as_rat(b)).collect();
    for _ in 2..=level {
        let prev_ext = values.split_off(a.n());
        let mut next: Vec<Rational> = x.iter().map(|&b| as_rat(b)).collect();
        for row in a.rows() {
            // the first branch whose variable is set; every row is covered
            let chosen = row.iter().position(|&j| x[j]).expect("covered row");
            for t in 0..row.len() {
                if t == chosen {
                    next.extend(x.iter().map(|&b| as_rat(b)));
                    next.extend(prev_ext.iter().cloned());
                } else {
                    next.extend(std::iter::repeat_n(Rational::zero(), a.n() + prev_ext.len()));
                }
            }
        }
        values = next;
    }
    values
}

/// Extends a binary feasible point to a full feasible assignment of the
/// level-`level` system: every row picks the first branch whose variable is
/// one, that block holds a recursive lift of the point and the others are zero.
pub fn lift(a: &CoverInstance, level: usize, x: &[bool]) -> Result<Vec<Rational>> {
    if level == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    check_binary_feasible(a, x)?;
    Ok(lift_values(a, level, x))
}

/// [`lift`] for a point given as rationals; every entry must be 0 or 1.
pub fn lift_point(a: &CoverInstance, level: usize, x: &[Rational]) -> Result<Vec<Rational>> {
    let bits = x
        .iter()
        .enumerate()
        .map(|(j, v)| {
            if v.is_zero() {
                Ok(false)
            } else if v.is_one() {
                Ok(true)
            } else {
                Err(Error::Precondition(format!("x{} = {v} is not binary", j + 1)))
            }
        })
        .collect::<Result<Vec<bool>>>()?;
    lift(a, level, &bits)
}
