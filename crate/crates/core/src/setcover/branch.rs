use crate::error::{Error, Result};
use crate::inequality::Inequality;
use crate::instance::CoverInstance;

/// `x_j = 0` for every `j` in `zeros`, and `x_one = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixing {
    pub zeros: Vec<usize>,
    pub one: usize,
}

impl Fixing {
    pub fn admits(&self, x: &[bool]) -> bool {
        x[self.one] && self.zeros.iter().all(|&j| !x[j])
    }
}

/// The disjunction `F_1 v ... v F_s` over an ordering `j_1, ..., j_s` of a
/// support, where `F_h` fixes `x_{j_1} = ... = x_{j_{h-1}} = 0` and `x_{j_h} = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchDisjunction {
    order: Vec<usize>,
    branches: Vec<Fixing>,
}

impl BranchDisjunction {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn branches(&self) -> &[Fixing] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Index of the unique branch admitting `x`, if any.
    pub fn branch_of(&self, x: &[bool]) -> Option<usize> {
        self.branches.iter().position(|f| f.admits(x))
    }
}

/// Vector branching on the support of `ineq`. `order` defaults to ascending
/// index and must otherwise be a permutation of the support.
pub fn vector_branch(a: &CoverInstance, ineq: &Inequality, order: Option<&[usize]>) -> Result<BranchDisjunction> {
    if ineq.n() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: ineq.n() });
    }
    if !ineq.rhs().is_positive() {
        return Err(Error::Precondition("vector branching needs a positive right-hand side".into()));
    }
    let support = ineq.support();
    let order = match order {
        None => support,
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != support {
                return Err(Error::Precondition("ordering is not a permutation of the support".into()));
            }
            o.to_vec()
        }
    };
    let branches = (0..order.len()).map(|h| Fixing { zeros: order[..h].to_vec(), one: order[h] }).collect();
    Ok(BranchDisjunction { order, branches })
}
