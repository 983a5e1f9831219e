mod common;

use pitchcut::lp::{check_membership, export_lp, parse_lp, solve_min, ExportOptions, LinearSystem, Sense};
use pitchcut::oracle::{cover_points, cover_valid_bruteforce};
use pitchcut::setcover::*;
use pitchcut::{pitch, CoverInstance, Inequality, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All vertices of a small system, by solving every square subsystem of
/// tight rows (equalities always tight) and keeping the feasible solutions.
fn vertices(sys: &LinearSystem) -> Vec<Vec<Rational>> {
    let d = sys.num_vars();
    assert!(d <= 10, "vertex enumeration is for tiny systems");
    let dense = |terms: &[(usize, Rational)]| {
        let mut row = vec![Rational::zero(); d];
        for (v, c) in terms {
            row[*v] = c.clone();
        }
        row
    };
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for c in sys.constraints() {
        let row = (dense(c.terms()), c.rhs.clone());
        if c.sense == Sense::Eq {
            eqs.push(row);
        } else {
            ineqs.push(row);
        }
    }
    for (v, var) in sys.vars().iter().enumerate() {
        let unit: Vec<Rational> = (0..d).map(|k| if k == v { Rational::one() } else { Rational::zero() }).collect();
        ineqs.push((unit.clone(), var.lower.clone()));
        ineqs.push((unit, var.upper.clone()));
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let k = d.saturating_sub(eqs.len().min(d));
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let rows: Vec<&(Vec<Rational>, Rational)> = eqs.iter().chain(pick.iter().map(|&i| &ineqs[i])).collect();
        if let Some(x) = solve_square(&rows, d) {
            if sys.is_feasible(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        // next k-combination of the inequality rows
        let mut i = k;
        while i > 0 && pick[i - 1] == ineqs.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

/// Unique solution of the stacked rows if they have rank `d`.
fn solve_square(rows: &[&(Vec<Rational>, Rational)], d: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|(a, b)| a.iter().cloned().chain([b.clone()]).collect()).collect();
    let mut r = 0;
    for col in 0..d {
        let p = (r..m.len()).find(|&i| !m[i][col].is_zero())?;
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in 0..=d {
                    let delta = &f * &m[r][c];
                    m[i][c] = &m[i][c] - &delta;
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[d].is_zero()) {
        return None;
    }
    Some((0..d).map(|i| m[i][d].clone()).collect())
}

fn triangle() -> CoverInstance {
    CoverInstance::from_one_based(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
}

fn bits(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|j| mask >> j & 1 == 1).collect()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

#[test]
fn single_row_level_two_projects_onto_the_row() {
    let a = CoverInstance::from_one_based(2, &[vec![1, 2]]).unwrap();
    let f = build_level(&a, 2, &BuildOptions::default()).unwrap();
    assert_eq!(f.system().num_vars(), 6);
    let projected: Vec<Vec<Rational>> = vertices(f.system()).into_iter().map(|v| v[..2].to_vec()).collect();
    for target in [[1, 0], [1, 1], [0, 1]] {
        assert!(projected.contains(&ints(&target)), "missing {target:?}");
    }
    for x in &projected {
        assert!(&x[0] + &x[1] >= Rational::one());
    }
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let single = CoverInstance::from_one_based(2, &[vec![1, 2]]).unwrap();
    for (a, level) in [(triangle(), 1), (single, 2)] {
        let f = build_level(&a, level, &BuildOptions::default()).unwrap();
        let verts = vertices(f.system());
        for _ in 0..20 {
            let c: Vec<(usize, Rational)> = (0..f.system().num_vars())
                .map(|v| (v, Rational::new(rng.gen_range(-3..=5), rng.gen_range(1..=3))))
                .collect();
            let best = verts
                .iter()
                .map(|x| c.iter().map(|(v, k)| k * &x[*v]).sum::<Rational>())
                .min()
                .unwrap();
            let lp = solve_min(f.system(), &c);
            assert_eq!(lp.value(), Some(&best));
            assert!(f.system().is_feasible(lp.point().unwrap()));
        }
    }
}

#[test]
fn level_two_cuts_off_the_symmetric_point() {
    let a = triangle();
    let half = vec![Rational::new(1, 2); 3];
    let f1 = build_level(&a, 1, &BuildOptions::default()).unwrap();
    let f2 = build_level(&a, 2, &BuildOptions::default()).unwrap();
    assert!(check_membership(f1.system(), &[0, 1, 2], &half).is_member());
    assert!(!check_membership(f2.system(), &[0, 1, 2], &half).is_member());
}

#[test]
fn feasible_points_lift_and_are_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..12 {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(1..=3);
        let a = common::random_cover(&mut rng, n, m, 3);
        for level in 1..=3 {
            let f = build_level(&a, level, &BuildOptions::default()).unwrap();
            let originals: Vec<usize> = f.original_vars().collect();
            for mask in cover_points(&a, 25).unwrap() {
                let x = bits(n, mask);
                let full = lift(&a, level, &x).unwrap();
                assert!(f.system().is_feasible(&full));
                if level == 2 {
                    let point: Vec<Rational> = full[..n].to_vec();
                    assert!(check_membership(f.system(), &originals, &point).is_member());
                }
            }
        }
    }
}

#[test]
fn sizes_follow_the_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..15 {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(1..=4);
        let a = common::random_cover(&mut rng, n, m, 3);
        let (n, m) = (a.n(), a.m());
        let mut prev = build_level(&a, 1, &BuildOptions::default()).unwrap().size_report();
        assert_eq!((prev.variables, prev.constraints, prev.nonzeros), (n, m, a.nonzeros()));
        for level in 2..=3 {
            let cur = build_level(&a, level, &BuildOptions::default()).unwrap().size_report();
            let ext = prev.variables - n;
            assert!(cur.variables - n <= m * n * (ext + n));
            assert!(cur.constraints <= m * (1 + 2 * (n * n + n * ext + n * prev.constraints)));
            assert!(cur.variables > prev.variables && cur.constraints > prev.constraints);
            prev = cur;
        }
    }
}

#[test]
fn higher_levels_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..6 {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(2..=3);
        let a = common::random_cover(&mut rng, n, m, 3);
        let mut certs: Vec<PitchCertifier> =
            (1..=3).map(|l| PitchCertifier::new(&a, l, &BuildOptions::default()).unwrap()).collect();
        for _ in 0..10 {
            let c = common::random_objective(&mut rng, n);
            let values: Vec<Rational> = certs.iter_mut().map(|cert| cert.min_value(&c).unwrap()).collect();
            assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
        }
    }
}

#[test]
fn level_two_satisfies_pitch_two_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..8 {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(1..=4);
        let a = common::random_cover(&mut rng, n, m, 3);
        let mut cert = PitchCertifier::new(&a, 2, &BuildOptions::default()).unwrap();
        for s in enumerate_strongest(&a, 2, DEFAULT_ENUMERATION_GUARD).unwrap() {
            if s.pitch.is_some_and(|p| p <= 2) {
                assert!(cover_valid_bruteforce(&a, &s.ineq, 25).unwrap());
                let slack = cert.slack(&s.ineq).unwrap();
                assert!(!slack.is_negative(), "{} has slack {slack}", s.ineq);
            }
        }
    }
}

#[test]
fn inequalities_containing_a_row_hold_at_level_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..6 {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(1..=3);
        let a = common::random_cover(&mut rng, n, m, 3);
        let mut cert = PitchCertifier::new(&a, 2, &BuildOptions::default()).unwrap();
        for s in enumerate_strongest(&a, 2, DEFAULT_ENUMERATION_GUARD).unwrap() {
            let support = s.ineq.support();
            let contains_row = a.rows().iter().any(|r| r.iter().all(|j| support.contains(j)));
            if contains_row && pitch(&s.ineq).is_ok_and(|p| p <= 2) {
                assert!(cert.min_value(s.ineq.coeffs()).unwrap() >= *s.ineq.rhs());
            }
        }
    }
}

#[test]
fn level_one_misses_the_pitch_two_inequality() {
    let all = Inequality::from_ints(&[1, 1, 1], 2);
    assert_eq!(certify_pitch(&triangle(), 1, &all).unwrap() - all.rhs(), Rational::new(-1, 2));
}

#[test]
fn level_two_export_round_trips() {
    let f = build_level(&triangle(), 2, &BuildOptions::default()).unwrap();
    let obj: Vec<(usize, Rational)> = (0..3).map(|j| (j, Rational::one())).collect();
    let text = export_lp(f.system(), &obj, ExportOptions::default());
    let (back, back_obj) = parse_lp(&text).unwrap();
    assert_eq!(back.num_vars(), f.size_report().variables);
    assert_eq!(back.num_constraints(), f.size_report().constraints);
    assert_eq!(back_obj, obj);
    assert!(text.contains("x_L2_R3_T2_1"));
    assert_eq!(solve_min(&back, &obj).value(), Some(&Rational::from(2)));
}

#[test]
fn dropping_vacuous_rows_keeps_the_optimum() {
    let a = triangle();
    let all = Inequality::from_ints(&[1, 1, 1], 2);
    let opts = BuildOptions { drop_vacuous_rows: true, ..Default::default() };
    let full = build_level(&a, 2, &BuildOptions::default()).unwrap();
    let lean = build_level(&a, 2, &opts).unwrap();
    assert_eq!(full.size_report().constraints - lean.size_report().constraints, 6);
    assert_eq!(certify_pitch_with(&a, 2, &all, &opts).unwrap(), Rational::from(2));
}
