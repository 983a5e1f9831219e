use crate::error::{Error, Result};
use crate::inequality::Inequality;
use crate::instance::CoverInstance;
use crate::lp::{LpOutcome, Simplex, VarId};
use crate::rational::Rational;

use super::level::{build_level, BuildOptions, LevelFormulation};

/// Minimizes objectives over the original variables of one level formulation,
/// reusing the simplex basis between calls.
pub struct PitchCertifier {
    formulation: LevelFormulation,
    simplex: Simplex,
}

impl PitchCertifier {
    pub fn new(a: &CoverInstance, level: usize, options: &BuildOptions) -> Result<Self> {
        Ok(Self::from_formulation(build_level(a, level, options)?))
    }

    pub fn from_formulation(formulation: LevelFormulation) -> Self {
        let simplex = Simplex::new(formulation.system());
        PitchCertifier { formulation, simplex }
    }

    pub fn formulation(&self) -> &LevelFormulation {
        &self.formulation
    }

    /// `min c^T x` over the formulation, `c` indexed by the original variables.
    pub fn min_value(&mut self, c: &[Rational]) -> Result<Rational> {
        let n = self.formulation.instance().n();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.len() });
        }
        let objective: Vec<(VarId, Rational)> =
            c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
        match self.simplex.minimize(&objective) {
            LpOutcome::Optimal { value, .. } => Ok(value),
            // every variable is boxed and the all-ones point lifts, so neither can happen
            other => Err(Error::Precondition(format!("level system did not solve to optimality: {other:?}"))),
        }
    }

    /// `min alpha^T x - alpha_0` over the formulation.
    pub fn slack(&mut self, ineq: &Inequality) -> Result<Rational> {
        Ok(self.min_value(ineq.coeffs())? - ineq.rhs())
    }
}

/// `min alpha^T x` over the level-`level` formulation of `a`.
pub fn certify_pitch(a: &CoverInstance, level: usize, ineq: &Inequality) -> Result<Rational> {
    certify_pitch_with(a, level, ineq, &BuildOptions::default())
}

pub fn certify_pitch_with(a: &CoverInstance, level: usize, ineq: &Inequality, options: &BuildOptions) -> Result<Rational> {
    if ineq.n() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: ineq.n() });
    }
    PitchCertifier::new(a, level, options)?.min_value(ineq.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CoverInstance {
        CoverInstance::from_one_based(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
    }

    #[test]
    fn triangle_values() {
        let a = triangle();
        let all = Inequality::from_ints(&[1, 1, 1], 2);
        assert_eq!(certify_pitch(&a, 1, &all).unwrap(), Rational::new(3, 2));
        assert_eq!(certify_pitch(&a, 2, &all).unwrap(), Rational::from(2));
        assert_eq!(certify_pitch(&a, 3, &all).unwrap(), Rational::from(2));
    }

    #[test]
    fn rows_hold_at_level_one() {
        let a = triangle();
        for row in a.rows() {
            assert!(certify_pitch(&a, 1, &Inequality::cover(3, row)).unwrap() >= Rational::one());
        }
    }

    #[test]
    fn warm_start_matches_cold_solves() {
        let a = triangle();
        let mut cert = PitchCertifier::new(&a, 2, &BuildOptions::default()).unwrap();
        for c in [[1, 1, 1], [2, 1, 0], [0, 0, 1], [3, 1, 2]] {
            let ineq = Inequality::from_ints(&c, 0);
            assert_eq!(cert.min_value(ineq.coeffs()).unwrap(), certify_pitch(&a, 2, &ineq).unwrap());
        }
        assert!(cert.min_value(&[Rational::one()]).is_err());
    }
}
