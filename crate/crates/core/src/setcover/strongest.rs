use crate::error::{Error, Result};
use crate::inequality::{dominates, pitch, Inequality};
use crate::instance::CoverInstance;
use crate::oracle::cover_points;

/// Default cap on `(p+1)^n * 2^n` for [`enumerate_strongest`].
pub const DEFAULT_ENUMERATION_GUARD: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq)]
pub struct StrongInequality {
    pub ineq: Inequality,
    /// `None` when the pitch is undefined.
    pub pitch: Option<usize>,
}

/// For every nonzero `alpha` in `{0..p}^n`, the inequality `alpha x >= alpha_0*`
/// with `alpha_0*` the minimum of `alpha x` over the binary feasible points.
pub fn enumerate_strongest(a: &CoverInstance, p: u32, guard: u128) -> Result<Vec<StrongInequality>> {
    let n = a.n();
    let work = (p as u128 + 1).checked_pow(n as u32).and_then(|v| v.checked_mul(1u128 << n.min(127)));
    match work {
        Some(w) if w <= guard => {}
        _ => {
            return Err(Error::GuardExceeded { what: "strongest-inequality enumeration", size: work.unwrap_or(u128::MAX), limit: guard })
        }
    }
    let points: Vec<Vec<i64>> = cover_points(a, 63)?
        .into_iter()
        .map(|m| (0..n).map(|j| (m >> j & 1) as i64).collect())
        .collect();
    let mut out = Vec::new();
    if p == 0 {
        return Ok(out);
    }
    let mut alpha = vec![0i64; n];
    loop {
        // odometer increment; stops after wrapping back to zero
        let mut j = 0;
        while j < n && alpha[j] == p as i64 {
            alpha[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
        alpha[j] += 1;
        let rhs = points
            .iter()
            .map(|x| x.iter().zip(&alpha).map(|(a, b)| a * b).sum::<i64>())
            .min()
            .expect("all-ones is feasible");
        let ineq = Inequality::from_ints(&alpha, rhs);
        let pitch = pitch(&ineq).ok();
        out.push(StrongInequality { ineq, pitch });
    }
    Ok(out)
}

/// Drops every inequality implied by another one in the list (ties keep the first).
pub fn undominated(list: &[Inequality]) -> Vec<Inequality> {
    let mut keep: Vec<Inequality> = Vec::new();
    'outer: for (i, b) in list.iter().enumerate() {
        for (k, a) in list.iter().enumerate() {
            if k == i {
                continue;
            }
            match dominates(a, b) {
                Ok(d) if d.holds() && (d == crate::inequality::Dominance::Strict || k < i) => continue 'outer,
                _ => {}
            }
        }
        keep.push(b.clone());
    }
    keep
}
