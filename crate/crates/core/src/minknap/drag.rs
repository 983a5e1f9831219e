use crate::error::{Error, Result};
use crate::inequality::{dominates, Dominance, Inequality};
use crate::instance::KnapsackInstance;

pub(crate) fn integer_coeffs(k: &KnapsackInstance, ineq: &Inequality) -> Result<(Vec<i64>, i64)> {
    if ineq.n() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), found: ineq.n() });
    }
    ineq.int_coeffs().ok_or_else(|| Error::Precondition("coefficients must be integers".into()))
}

fn drag_of(k: &KnapsackInstance, alpha: &[i64], class: i64) -> Vec<usize> {
    let Some(lightest) = (0..alpha.len()).filter(|&j| alpha[j] == class).map(|j| k.weight(j)).min() else {
        return Vec::new();
    };
    (0..alpha.len()).filter(|&h| k.weight(h) >= lightest && alpha[h] > 0 && alpha[h] < class).collect()
}

/// `delta(class)`: indices with weight at least the lightest coefficient-`class`
/// index and coefficient strictly between 0 and `class`.
pub fn drag(k: &KnapsackInstance, ineq: &Inequality, class: i64) -> Result<Vec<usize>> {
    let (alpha, _) = integer_coeffs(k, ineq)?;
    Ok(drag_of(k, &alpha, class))
}

/// Repeatedly lowers a coefficient `class` to `class - 1` (at the lightest,
/// lowest-index member of the class) while some `class >= 2` has drag weight
/// at least `big_p - 1`. Returns `None` if nothing changes.
pub fn strengthen(k: &KnapsackInstance, ineq: &Inequality, big_p: i64) -> Result<Option<Inequality>> {
    let (mut alpha, rhs) = integer_coeffs(k, ineq)?;
    if let Some(j) = alpha.iter().position(|&a| a > big_p) {
        return Err(Error::Precondition(format!("coefficient of x{} exceeds {big_p}", j + 1)));
    }
    let mut changed = false;
    loop {
        let step = (2..=big_p).find(|&class| {
            let d = drag_of(k, &alpha, class);
            !d.is_empty() && d.iter().map(|&h| alpha[h]).sum::<i64>() >= big_p - 1
        });
        let Some(class) = step else { break };
        let i = (0..alpha.len())
            .filter(|&j| alpha[j] == class)
            .min_by_key(|&j| (k.weight(j), j))
            .expect("class with nonempty drag is nonempty");
        alpha[i] = class - 1;
        changed = true;
    }
    if !changed {
        return Ok(None);
    }
    let out = Inequality::from_ints(&alpha, rhs);
    debug_assert_eq!(dominates(&out, ineq), Ok(Dominance::Strict));
    Ok(Some(out))
}
