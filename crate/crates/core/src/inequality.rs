//! Covering-type inequalities `alpha^T x >= alpha_0` with `alpha >= 0`, and
//! fractional points they are evaluated at.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Result<Self> {
        if let Some(j) = coeffs.iter().position(Rational::is_negative) {
            return Err(Error::Precondition(format!("coefficient of x{} is negative", j + 1)));
        }
        Ok(Inequality { coeffs, rhs })
    }

    /// Integer coefficients; panics on a negative entry.
    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect(), Rational::from(rhs))
            .expect("nonnegative coefficients")
    }

    /// The cover inequality `x(S) >= 1` over `n` variables.
    pub fn cover(n: usize, support: &[usize]) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        for &j in support {
            coeffs[j] = Rational::one();
        }
        Inequality { coeffs, rhs: Rational::one() }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Rational {
        &self.coeffs[j]
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    /// `S(alpha)`: indices with a positive coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.coeffs[j].is_positive()).collect()
    }

    pub fn coeff_sum(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Coefficients and rhs as machine integers, if they all are.
    pub fn int_coeffs(&self) -> Option<(Vec<i64>, i64)> {
        let c = self.coeffs.iter().map(Rational::to_i64).collect::<Option<Vec<_>>>()?;
        Some((c, self.rhs.to_i64()?))
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive());
        Inequality {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            rhs: &self.rhs * factor,
        }
    }

    /// Left-hand side at a 0/1 point given as a bitmask.
    pub fn lhs_mask(&self, mask: u64) -> Rational {
        (0..self.n()).filter(|&j| mask >> j & 1 == 1).map(|j| &self.coeffs[j]).sum()
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "{c} x{}", j + 1)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " >= {}", self.rhs)
    }
}

/// A point of `[0,1]^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalPoint {
    entries: Vec<Rational>,
}

impl FractionalPoint {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some(j) = entries.iter().position(|v| *v < zero || *v > one) {
            return Err(Error::Precondition(format!("entry {} = {} lies outside [0,1]", j + 1, entries[j])));
        }
        Ok(FractionalPoint { entries })
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        FractionalPoint {
            entries: (0..n).map(|j| Rational::from((mask >> j & 1) as i64)).collect(),
        }
    }

    pub fn ones(n: usize) -> Self {
        FractionalPoint { entries: vec![Rational::one(); n] }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> &Rational {
        &self.entries[j]
    }
}

/// The smallest `pi` such that the `pi` smallest positive coefficients sum to
/// at least the right-hand side. Zero exactly when `alpha_0 <= 0`.
pub fn pitch(ineq: &Inequality) -> Result<usize> {
    if !ineq.rhs.is_positive() {
        return Ok(0);
    }
    let mut positive: Vec<&Rational> = ineq.coeffs.iter().filter(|c| c.is_positive()).collect();
    positive.sort();
    let mut acc = Rational::zero();
    for (k, c) in positive.into_iter().enumerate() {
        acc += c;
        if acc >= ineq.rhs {
            return Ok(k + 1);
        }
    }
    Err(Error::PitchUndefined)
}

/// Result of comparing two inequalities over the unit box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// `a` does not dominate `b`.
    No,
    /// `a` dominates `b` and the two are identical.
    Equal,
    /// `a` dominates `b` with at least one strict comparison.
    Strict,
}

impl Dominance {
    pub fn holds(self) -> bool {
        self != Dominance::No
    }
}

/// `a` dominates `b` when `a`'s coefficients are componentwise no larger and
/// its rhs is no smaller, so every nonnegative point satisfying `a` satisfies `b`.
pub fn dominates(a: &Inequality, b: &Inequality) -> Result<Dominance> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    let mut strict = a.rhs > b.rhs;
    if a.rhs < b.rhs {
        return Ok(Dominance::No);
    }
    for (ca, cb) in a.coeffs.iter().zip(&b.coeffs) {
        if ca > cb {
            return Ok(Dominance::No);
        }
        strict |= ca < cb;
    }
    Ok(if strict { Dominance::Strict } else { Dominance::Equal })
}

/// Slack `alpha^T pt - alpha_0`; negative means the point violates the inequality.
pub fn evaluate(ineq: &Inequality, pt: &FractionalPoint) -> Result<Rational> {
    if ineq.n() != pt.n() {
        return Err(Error::DimensionMismatch { expected: ineq.n(), found: pt.n() });
    }
    let lhs: Rational = ineq
        .coeffs
        .iter()
        .zip(&pt.entries)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| c * v)
        .sum();
    Ok(lhs - &ineq.rhs)
}
