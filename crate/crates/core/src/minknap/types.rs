//! Inequalities `x(S_1) + 2 x(S_2) + ... + q x(S_q) >= q` classified by type
//! `(I, L, m)`: the nonempty classes, the heaviest members `L_i` of each class
//! and a lightest member `m_i`.

use serde::{Deserialize, Serialize};

use super::drag::{drag, integer_coeffs};
use crate::error::{Error, Result};
use crate::inequality::Inequality;
use crate::instance::KnapsackInstance;

/// The data of one class `i` of a type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeClass {
    /// The coefficient `i`.
    pub coeff: usize,
    /// `L_i`, sorted by index.
    pub heavy: Vec<usize>,
    /// `m_i`.
    pub lightest: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IneqType {
    pub q: usize,
    /// One entry per `i` in `I`, by increasing coefficient.
    pub classes: Vec<TypeClass>,
}

impl IneqType {
    pub fn class(&self, coeff: usize) -> Option<&TypeClass> {
        self.classes.iter().find(|c| c.coeff == coeff)
    }

    /// Checks the enumeration requirements: disjoint `{m_i} + L_i`, the size
    /// cap on `L_i`, `m_i` in `L_i` when `|L_i| < q - 1`, and `w_{m_i} < w_{m_k}`
    /// for later classes when `m_i` is outside `L_i`.
    pub fn is_admissible(&self, k: &KnapsackInstance, cap: usize) -> bool {
        let mut used = vec![false; k.n()];
        for (pos, c) in self.classes.iter().enumerate() {
            if c.coeff == 0 || c.coeff > self.q || c.heavy.len() > cap || c.lightest >= k.n() {
                return false;
            }
            if pos > 0 && self.classes[pos - 1].coeff >= c.coeff {
                return false;
            }
            let inside = c.heavy.contains(&c.lightest);
            if c.heavy.len() + 1 < self.q && !inside {
                return false;
            }
            if !inside && self.classes[pos + 1..].iter().any(|later| k.weight(c.lightest) >= k.weight(later.lightest)) {
                return false;
            }
            for &j in c.heavy.iter().chain(std::iter::once(&c.lightest)) {
                if j >= k.n() || (used[j] && !(j == c.lightest && inside)) {
                    return false;
                }
                used[j] = true;
            }
        }
        !self.classes.is_empty()
    }
}

/// Splits an inequality of the form `sum_i i x(S_i) >= q` into its classes.
pub(crate) fn classes_of(k: &KnapsackInstance, ineq: &Inequality) -> Result<(usize, Vec<Vec<usize>>)> {
    let (alpha, rhs) = integer_coeffs(k, ineq)?;
    if rhs < 1 {
        return Err(Error::Precondition("right-hand side must be a positive integer".into()));
    }
    if let Some(j) = alpha.iter().position(|&a| a > rhs) {
        return Err(Error::Precondition(format!("coefficient of x{} exceeds the right-hand side", j + 1)));
    }
    let q = rhs as usize;
    let mut classes = vec![Vec::new(); q + 1];
    for (j, &a) in alpha.iter().enumerate() {
        classes[a as usize].push(j);
    }
    Ok((q, classes))
}

/// The type of an inequality, with ties among equal weights broken by index:
/// `m_i` is the lightest lowest-index member and `L_i` the last `|L_i|`
/// members in (weight, index) order.
pub fn compute_type(k: &KnapsackInstance, ineq: &Inequality) -> Result<IneqType> {
    let (q, classes) = classes_of(k, ineq)?;
    let mut out = Vec::new();
    for i in 1..=q {
        if classes[i].is_empty() {
            continue;
        }
        let mut dragged = vec![false; k.n()];
        for kk in i + 1..=q {
            for h in drag(k, ineq, kk as i64)? {
                dragged[h] = true;
            }
        }
        let d_count = classes[i].iter().filter(|&&j| dragged[j]).count();
        let size = d_count.max((q - 1).min(classes[i].len()));
        let mut order = classes[i].clone();
        order.sort_by_key(|&j| (k.weight(j), j));
        let mut heavy = order[order.len() - size..].to_vec();
        debug_assert!(classes[i].iter().filter(|&&j| dragged[j]).all(|j| heavy.contains(j)));
        heavy.sort_unstable();
        out.push(TypeClass { coeff: i, heavy, lightest: order[0] });
    }
    if out.is_empty() {
        return Err(Error::Precondition("inequality has an empty support".into()));
    }
    Ok(IneqType { q, classes: out })
}

/// `max sum_i w(T_i)` over `T_i` inside `L_i` with `sum_i i |T_i| <= q - 1`.
pub fn signature(k: &KnapsackInstance, tau: &IneqType) -> u64 {
    let budget = tau.q.saturating_sub(1);
    // best[b]: largest weight with budget use at most b
    let mut best = vec![0u64; budget + 1];
    for c in &tau.classes {
        let mut weights: Vec<u64> = c.heavy.iter().map(|&j| k.weight(j)).collect();
        weights.sort_unstable_by(|a, b| b.cmp(a));
        let prefix: Vec<u64> = std::iter::once(0).chain(weights.iter().scan(0, |s, w| {
            *s += w;
            Some(*s)
        })).collect();
        let mut next = best.clone();
        for b in 0..=budget {
            for t in 1..prefix.len() {
                let cost = t * c.coeff;
                if cost > b {
                    break;
                }
                next[b] = next[b].max(best[b - cost] + prefix[t]);
            }
        }
        best = next;
    }
    best[budget]
}

/// Validity through `sum_i w(S_i) >= sigma + sum_j w_j - w_0 + 1`.
pub fn check_valid_by_signature(k: &KnapsackInstance, ineq: &Inequality) -> Result<bool> {
    let (_, classes) = classes_of(k, ineq)?;
    let tau = compute_type(k, ineq)?;
    let support_weight: u64 = classes[1..].iter().flatten().map(|&j| k.weight(j)).sum();
    Ok(support_weight as i128 >= signature(k, &tau) as i128 + crate::oracle::cover_threshold(k) as i128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Use the cap `|L_i| <= q^2 - 1` instead of `max{q(q-2), q-1}`.
    pub literal_cap: bool,
    /// Refuse to produce more candidates than this.
    pub guard: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { literal_cap: false, guard: 5_000_000 }
    }
}

pub fn heavy_cap(q: usize, literal: bool) -> usize {
    if literal {
        q * q - 1
    } else {
        (q * q.saturating_sub(2)).max(q - 1)
    }
}

struct Enumerator<'a> {
    k: &'a KnapsackInstance,
    q: usize,
    cap: usize,
    guard: usize,
    coeffs: Vec<usize>,
    stack: Vec<TypeClass>,
    used: Vec<bool>,
    out: Vec<IneqType>,
}

impl Enumerator<'_> {
    fn emit(&mut self) -> Result<()> {
        if self.out.len() >= self.guard {
            return Err(Error::GuardExceeded { what: "type candidates", size: self.out.len() as u128 + 1, limit: self.guard as u128 });
        }
        self.out.push(IneqType { q: self.q, classes: self.stack.clone() });
        Ok(())
    }

    fn class(&mut self, pos: usize) -> Result<()> {
        if pos == self.coeffs.len() {
            return self.emit();
        }
        let mut heavy = Vec::new();
        self.subsets(pos, 0, &mut heavy)
    }

    fn subsets(&mut self, pos: usize, from: usize, heavy: &mut Vec<usize>) -> Result<()> {
        self.lightest(pos, heavy)?;
        if heavy.len() == self.cap {
            return Ok(());
        }
        for j in from..self.k.n() {
            if self.used[j] {
                continue;
            }
            self.used[j] = true;
            heavy.push(j);
            self.subsets(pos, j + 1, heavy)?;
            heavy.pop();
            self.used[j] = false;
        }
        Ok(())
    }

    fn lightest(&mut self, pos: usize, heavy: &[usize]) -> Result<()> {
        let w = |j: usize| self.k.weight(j);
        for m in 0..self.k.n() {
            let inside = heavy.contains(&m);
            if !inside && (heavy.len() + 1 < self.q || self.used[m]) {
                continue;
            }
            // an earlier class whose m sits outside its L must be strictly lighter
            if self.stack.iter().any(|c| !c.heavy.contains(&c.lightest) && w(c.lightest) >= w(m)) {
                continue;
            }
            if !inside {
                self.used[m] = true;
            }
            self.stack.push(TypeClass { coeff: self.coeffs[pos], heavy: heavy.to_vec(), lightest: m });
            let r = self.class(pos + 1);
            self.stack.pop();
            if !inside {
                self.used[m] = false;
            }
            r?;
        }
        Ok(())
    }
}

/// Every candidate type for `sum_i i x(S_i) >= q`: all choices of `I`, `L` and
/// `m` meeting [`IneqType::is_admissible`].
pub fn enumerate_types(k: &KnapsackInstance, q: usize, options: &EnumOptions) -> Result<Vec<IneqType>> {
    if q == 0 {
        return Err(Error::Precondition("q must be at least 1".into()));
    }
    let mut e = Enumerator {
        k,
        q,
        cap: heavy_cap(q, options.literal_cap).min(k.n()),
        guard: options.guard,
        coeffs: Vec::new(),
        stack: Vec::new(),
        used: vec![false; k.n()],
        out: Vec::new(),
    };
    for set in 1u32..(1 << q.min(31)) {
        e.coeffs = (1..=q).filter(|i| set >> (i - 1) & 1 == 1).collect();
        e.class(0)?;
    }
    Ok(e.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knapex() -> KnapsackInstance {
        KnapsackInstance::new(vec![10, 10, 80, 100, 80, 20, 50, 25], 280).unwrap()
    }

    fn exq3() -> Inequality {
        Inequality::from_ints(&[1, 1, 1, 1, 0, 3, 3, 4], 4)
    }

    fn knapex_type() -> IneqType {
        IneqType {
            q: 4,
            classes: vec![
                TypeClass { coeff: 1, heavy: vec![1, 2, 3], lightest: 0 },
                TypeClass { coeff: 3, heavy: vec![5, 6], lightest: 5 },
                TypeClass { coeff: 4, heavy: vec![7], lightest: 7 },
            ],
        }
    }

    #[test]
    fn knapex_type_and_signature() {
        let tau = compute_type(&knapex(), &exq3()).unwrap();
        assert_eq!(tau, knapex_type());
        assert!(tau.is_admissible(&knapex(), heavy_cap(4, false)));
        assert_eq!(signature(&knapex(), &tau), 190);
        assert!(check_valid_by_signature(&knapex(), &exq3()).unwrap());
    }

    #[test]
    fn cover_and_q2_types() {
        let k = KnapsackInstance::new(vec![5, 3, 4, 6], 10).unwrap();
        let tau = compute_type(&k, &Inequality::from_ints(&[1, 1, 1, 0], 1)).unwrap();
        assert_eq!(tau.classes, vec![TypeClass { coeff: 1, heavy: vec![], lightest: 1 }]);
        assert_eq!(signature(&k, &tau), 0);
        let tau = compute_type(&k, &Inequality::from_ints(&[1, 1, 2, 2], 2)).unwrap();
        assert!(tau.classes.iter().all(|c| c.heavy.len() == 1));
    }

    #[test]
    fn signature_of_empty_heavy_sets() {
        let tau = IneqType { q: 3, classes: vec![TypeClass { coeff: 1, heavy: vec![], lightest: 0 }] };
        assert_eq!(signature(&knapex(), &tau), 0);
    }

    #[test]
    fn example_validity() {
        let mono = KnapsackInstance::new(vec![10, 10, 5, 6, 7], 10).unwrap();
        assert!(check_valid_by_signature(&mono, &Inequality::from_ints(&[2, 2, 1, 1, 1], 2)).unwrap());
        let notmono = KnapsackInstance::new(vec![6, 6, 5, 4, 4], 13).unwrap();
        // every feasible point has at least three items
        assert!(check_valid_by_signature(&notmono, &Inequality::from_ints(&[1, 1, 1, 1, 1], 2)).unwrap());
        assert!(check_valid_by_signature(&notmono, &Inequality::from_ints(&[1, 1, 2, 1, 1], 3)).unwrap());
        assert!(!check_valid_by_signature(&notmono, &Inequality::from_ints(&[1, 1, 1, 1, 1], 4)).unwrap());
    }

    #[test]
    fn enumeration_small_cases() {
        let k = KnapsackInstance::new(vec![3, 5, 4], 8).unwrap();
        let q1 = enumerate_types(&k, 1, &EnumOptions::default()).unwrap();
        assert_eq!(q1.len(), 3);
        assert!(q1.iter().all(|t| t.classes.len() == 1 && t.classes[0].heavy.is_empty()));
        let q2 = enumerate_types(&k, 2, &EnumOptions::default()).unwrap();
        assert!(q2.iter().all(|t| t.classes.iter().all(|c| c.heavy.len() <= 1)));
        assert!(q2.iter().all(|t| t.is_admissible(&k, 1)));
        let opts = EnumOptions { guard: 2, ..Default::default() };
        assert!(matches!(enumerate_types(&k, 2, &opts), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn caps() {
        assert_eq!(heavy_cap(1, false), 0);
        assert_eq!(heavy_cap(2, false), 1);
        assert_eq!(heavy_cap(3, false), 3);
        assert_eq!(heavy_cap(3, true), 8);
    }
}
