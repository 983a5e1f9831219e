use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Ge => lhs >= rhs,
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Rational,
    pub upper: Rational,
}

impl Variable {
    pub fn is_fixed(&self) -> bool {
        self.lower == self.upper
    }
}

/// A sparse row: sorted by variable, no duplicates, no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    terms: Vec<(VarId, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    /// Merges repeated variables and drops zero coefficients; a row whose
    /// terms all cancel is kept as an empty row.
    pub fn new(terms: impl IntoIterator<Item = (VarId, Rational)>, sense: Sense, rhs: Rational) -> Self {
        let mut merged: BTreeMap<VarId, Rational> = BTreeMap::new();
        for (v, c) in terms {
            *merged.entry(v).or_default() += c;
        }
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Constraint { terms, sense, rhs }
    }

    pub fn terms(&self) -> &[(VarId, Rational)] {
        &self.terms
    }

    pub fn activity(&self, values: &[Rational]) -> Rational {
        self.terms.iter().map(|(v, c)| c * &values[*v]).sum()
    }

    pub fn is_satisfied(&self, values: &[Rational]) -> bool {
        self.sense.holds(&self.activity(values), &self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeReport {
    pub variables: usize,
    pub constraints: usize,
    pub nonzeros: usize,
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} variables, {} constraints, {} nonzeros",
            self.variables, self.constraints, self.nonzeros
        )
    }
}

/// A linear constraint system over bounded variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearSystem {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Rational, upper: Rational) -> VarId {
        assert!(lower <= upper, "empty bound interval");
        self.vars.push(Variable { name: name.into(), lower, upper });
        self.vars.len() - 1
    }

    /// A variable boxed in `[0, 1]`.
    pub fn add_unit_var(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(name, Rational::zero(), Rational::one())
    }

    pub fn add_constraint(&mut self, c: Constraint) -> Result<usize> {
        if let Some((v, _)) = c.terms.iter().find(|(v, _)| *v >= self.vars.len()) {
            return Err(Error::Precondition(format!("constraint references unknown variable {v}")));
        }
        self.constraints.push(c);
        Ok(self.constraints.len() - 1)
    }

    /// Shorthand for rows built from trusted indices.
    pub fn push_row(&mut self, terms: impl IntoIterator<Item = (VarId, Rational)>, sense: Sense, rhs: Rational) {
        let c = Constraint::new(terms, sense, rhs);
        debug_assert!(c.terms.iter().all(|(v, _)| *v < self.vars.len()));
        self.constraints.push(c);
    }

    pub fn set_bounds(&mut self, v: VarId, lower: Rational, upper: Rational) {
        assert!(lower <= upper, "empty bound interval");
        self.vars[v].lower = lower;
        self.vars[v].upper = upper;
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, v: VarId) -> &Variable {
        &self.vars[v]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn find_var(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport {
            variables: self.vars.len(),
            constraints: self.constraints.len(),
            nonzeros: self.constraints.iter().map(|c| c.terms.len()).sum(),
        }
    }

    /// Exact check of every bound and constraint at a full assignment.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.vars.len()
            && self.vars.iter().zip(values).all(|(v, x)| v.lower <= *x && *x <= v.upper)
            && self.constraints.iter().all(|c| c.is_satisfied(values))
    }

    /// Index of the first violated row, if any (bounds are not checked).
    pub fn first_violated_row(&self, values: &[Rational]) -> Option<usize> {
        self.constraints.iter().position(|c| !c.is_satisfied(values))
    }
}
