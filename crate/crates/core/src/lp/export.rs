//! LP text format.
//!
//! The writer emits the common `Minimize / Subject To / Bounds / End` dialect
//! with rows named `R<k>`. Coefficients that are finite decimals are written
//! as decimals; a row containing any other rational is multiplied through by
//! the least common denominator so it can be written with integers. Bounds
//! that are not finite decimals become single-variable rows named `B<k>`,
//! which [`parse_lp`] folds back into bounds.

use std::collections::HashMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::system::{Constraint, LinearSystem, Sense, VarId};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, Default)]
pub struct ExportOptions {
    /// Write fixed variables as `x = v` instead of `v <= x <= v`.
    pub fixed_as_equal: bool,
}

fn is_decimal(r: &Rational) -> bool {
    let mut d = r.denom();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_even() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    d.is_one()
}

/// Exact decimal rendering; only valid when `is_decimal` holds.
fn decimal(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_string();
    }
    let mut digits = 0usize;
    let mut scaled = r.clone();
    let ten = Rational::from(10);
    while !scaled.is_integer() {
        scaled *= &ten;
        digits += 1;
    }
    let n = scaled.numer();
    let negative = n < BigInt::zero();
    let mut s = (if negative { -n } else { n }).to_string();
    if s.len() <= digits {
        s = "0".repeat(digits - s.len() + 1) + &s;
    }
    let point = s.len() - digits;
    format!("{}{}.{}", if negative { "-" } else { "" }, &s[..point], &s[point..])
}

fn denominator_lcm<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()))
}

fn write_terms(out: &mut String, terms: &[(VarId, Rational)], names: &[String], scale: &Rational) {
    for (i, (v, c)) in terms.iter().enumerate() {
        let c = c * scale;
        let text = decimal(&c.abs());
        match (i, c.is_negative()) {
            (0, false) => write!(out, "{text} {}", names[*v]),
            (0, true) => write!(out, "-{text} {}", names[*v]),
            (_, false) => write!(out, " + {text} {}", names[*v]),
            (_, true) => write!(out, " - {text} {}", names[*v]),
        }
        .unwrap();
    }
}

fn row_scale(terms: &[(VarId, Rational)], rhs: &Rational) -> Rational {
    if terms.iter().all(|(_, c)| is_decimal(c)) && is_decimal(rhs) {
        Rational::one()
    } else {
        Rational::from(denominator_lcm(terms.iter().map(|(_, c)| c).chain(std::iter::once(rhs))))
    }
}

pub fn export_lp(sys: &LinearSystem, objective: &[(VarId, Rational)], options: ExportOptions) -> String {
    let names: Vec<String> = sys.vars().iter().map(|v| v.name.clone()).collect();
    let mut out = String::new();
    let obj = Constraint::new(objective.iter().cloned(), Sense::Eq, Rational::zero());
    let obj_scale = row_scale(obj.terms(), &Rational::zero());
    if !obj_scale.is_one() {
        writeln!(out, "\\ objective multiplied by {obj_scale}").unwrap();
    }
    out.push_str("Minimize\n obj: ");
    if obj.terms().is_empty() {
        out.push('0');
        if let Some(first) = names.first() {
            write!(out, " {first}").unwrap();
        }
    } else {
        write_terms(&mut out, obj.terms(), &names, &obj_scale);
    }
    out.push_str("\nSubject To\n");
    for (k, c) in sys.constraints().iter().enumerate() {
        write!(out, " R{}: ", k + 1).unwrap();
        let scale = row_scale(c.terms(), &c.rhs);
        if c.terms().is_empty() {
            // a row whose terms cancelled; the reader drops the zero coefficient
            write!(out, "0 {}", names.first().map(String::as_str).unwrap_or("x1")).unwrap();
        } else {
            write_terms(&mut out, c.terms(), &names, &scale);
        }
        writeln!(out, " {} {}", c.sense, decimal(&(&c.rhs * &scale))).unwrap();
    }
    let mut bound_rows = String::new();
    let mut nb = 0usize;
    out.push_str("Bounds\n");
    for (v, var) in sys.vars().iter().enumerate() {
        let lo_ok = is_decimal(&var.lower);
        let hi_ok = is_decimal(&var.upper);
        if var.is_fixed() && lo_ok && options.fixed_as_equal {
            writeln!(out, " {} = {}", names[v], decimal(&var.lower)).unwrap();
            continue;
        }
        let lo = if lo_ok { decimal(&var.lower) } else { "-inf".into() };
        let hi = if hi_ok { decimal(&var.upper) } else { "+inf".into() };
        writeln!(out, " {lo} <= {} <= {hi}", names[v]).unwrap();
        for (ok, bound, sense) in [(lo_ok, &var.lower, Sense::Ge), (hi_ok, &var.upper, Sense::Le)] {
            if !ok {
                nb += 1;
                let d = Rational::from(bound.denom());
                writeln!(bound_rows, " B{nb}: {} {} {} {}", decimal(&d), names[v], sense, decimal(&(bound * &d)))
                    .unwrap();
            }
        }
    }
    if !bound_rows.is_empty() {
        // bounds that are not finite decimals, stated as scaled rows
        let at = out.find("Bounds\n").unwrap();
        out.insert_str(at, &bound_rows);
    }
    out.push_str("End\n");
    out
}

fn parse_number(tok: &str) -> Result<Rational> {
    match tok {
        "inf" | "+inf" | "infinity" | "+infinity" | "-inf" | "-infinity" => {
            Err(Error::Parse(format!("unexpected infinity {tok:?}")))
        }
        _ => tok.parse(),
    }
}

fn parse_terms(text: &str, vars: &mut Vars) -> Result<Vec<(VarId, Rational)>> {
    let mut terms = Vec::new();
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    for tok in text.split_whitespace() {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ if tok.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-') && tok.parse::<Rational>().is_ok() => {
                coef = Some(tok.parse()?);
            }
            _ => {
                let c = &sign * &coef.take().unwrap_or_else(Rational::one);
                terms.push((vars.id(tok), c));
                sign = Rational::one();
            }
        }
    }
    Ok(terms)
}

#[derive(Default)]
struct Vars {
    ids: HashMap<String, VarId>,
    names: Vec<String>,
}

impl Vars {
    fn id(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.ids.get(name) {
            return v;
        }
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }
}

struct RawRow {
    name: String,
    terms: Vec<(VarId, Rational)>,
    sense: Sense,
    rhs: Rational,
}

fn split_sense(line: &str) -> Result<(&str, Sense, &str)> {
    for (pat, sense) in [(">=", Sense::Ge), ("<=", Sense::Le), ("=", Sense::Eq)] {
        if let Some((l, r)) = line.split_once(pat) {
            return Ok((l, sense, r));
        }
    }
    Err(Error::Parse(format!("no sense in {line:?}")))
}

/// Reads the dialect written by [`export_lp`] back into a system and objective.
/// Variables take the order in which the `Bounds` section lists them.
pub fn parse_lp(text: &str) -> Result<(LinearSystem, Vec<(VarId, Rational)>)> {
    #[derive(PartialEq)]
    enum Section {
        Head,
        Objective,
        Rows,
        Bounds,
        Done,
    }
    let mut section = Section::Head;
    let mut vars = Vars::default();
    let mut objective = Vec::new();
    let mut rows: Vec<RawRow> = Vec::new();
    let mut bounds: Vec<(String, Option<Rational>, Option<Rational>)> = Vec::new();

    for raw in text.lines() {
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.to_ascii_lowercase().as_str() {
            "minimize" => {
                section = Section::Objective;
                continue;
            }
            "subject to" => {
                section = Section::Rows;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Objective => {
                let body = line.split_once(':').map_or(line, |(_, b)| b);
                objective = parse_terms(body, &mut vars)?;
            }
            Section::Rows => {
                let (name, body) = line.split_once(':').ok_or_else(|| Error::Parse(format!("unnamed row {line:?}")))?;
                let (lhs, sense, rhs) = split_sense(body)?;
                rows.push(RawRow {
                    name: name.trim().to_string(),
                    terms: parse_terms(lhs, &mut vars)?,
                    sense,
                    rhs: parse_number(rhs.trim())?,
                });
            }
            Section::Bounds => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                let bound = |tok: &str| -> Result<Option<Rational>> {
                    if tok.contains("inf") {
                        Ok(None)
                    } else {
                        parse_number(tok).map(Some)
                    }
                };
                match parts.as_slice() {
                    [lo, "<=", name, "<=", hi] => bounds.push((name.to_string(), bound(lo)?, bound(hi)?)),
                    [name, "=", v] => {
                        let v = parse_number(v)?;
                        bounds.push((name.to_string(), Some(v.clone()), Some(v)));
                    }
                    _ => return Err(Error::Parse(format!("unsupported bound {line:?}"))),
                }
            }
            Section::Head | Section::Done => {
                return Err(Error::Parse(format!("text outside a section: {line:?}")));
            }
        }
    }
    if section != Section::Done {
        return Err(Error::Parse("missing End".into()));
    }

    // final variable order follows the Bounds section
    let mut sys = LinearSystem::new();
    let mut remap = vec![usize::MAX; vars.names.len()];
    let mut pending: HashMap<String, (Option<Rational>, Option<Rational>)> = HashMap::new();
    for (name, lo, hi) in &bounds {
        let id = vars.id(name);
        if remap.len() <= id {
            remap.resize(id + 1, usize::MAX);
        }
        remap[id] = sys.num_vars();
        sys.add_var(name.clone(), Rational::zero(), Rational::zero());
        pending.insert(name.clone(), (lo.clone(), hi.clone()));
    }
    if let Some(name) = vars.names.iter().enumerate().find(|(i, _)| remap.get(*i).is_none_or(|&r| r == usize::MAX)) {
        return Err(Error::Parse(format!("variable {} has no bounds entry", name.1)));
    }

    for row in rows {
        let terms: Vec<(VarId, Rational)> = row.terms.into_iter().map(|(v, c)| (remap[v], c)).collect();
        if row.name.starts_with('B') && terms.len() == 1 {
            let (v, d) = &terms[0];
            let value = &row.rhs / d;
            let name = sys.var(*v).name.clone();
            let entry = pending.get_mut(&name).unwrap();
            match row.sense {
                Sense::Ge => entry.0 = Some(value),
                Sense::Le => entry.1 = Some(value),
                Sense::Eq => *entry = (Some(value.clone()), Some(value)),
            }
            continue;
        }
        sys.push_row(terms, row.sense, row.rhs);
    }
    for v in 0..sys.num_vars() {
        let name = sys.var(v).name.clone();
        match pending.remove(&name) {
            Some((Some(lo), Some(hi))) if lo <= hi => sys.set_bounds(v, lo, hi),
            _ => return Err(Error::Parse(format!("variable {name} needs finite bounds"))),
        }
    }
    let objective = objective.into_iter().map(|(v, c)| (remap[v], c)).filter(|(_, c)| !c.is_zero()).collect();
    Ok((sys, objective))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> LinearSystem {
        let mut s = LinearSystem::new();
        for j in 0..3 {
            s.add_unit_var(format!("x{}", j + 1));
        }
        for pair in [[0, 1], [0, 2], [1, 2]] {
            s.push_row(pair.iter().map(|&v| (v, Rational::one())), Sense::Ge, Rational::one());
        }
        s
    }

    #[test]
    fn empty_system() {
        let text = export_lp(&LinearSystem::new(), &[], ExportOptions::default());
        assert_eq!(text, "Minimize\n obj: 0\nSubject To\nBounds\nEnd\n");
    }

    #[test]
    fn triangle_text() {
        let obj: Vec<_> = (0..3).map(|v| (v, Rational::one())).collect();
        let text = export_lp(&triangle(), &obj, ExportOptions::default());
        let rows = text.lines().filter(|l| l.trim_start().starts_with('R')).count();
        let bounds = text.lines().filter(|l| l.contains("<= x")).count();
        assert_eq!(rows, 3);
        assert_eq!(bounds, 3);
        assert!(text.contains(" R1: 1 x1 + 1 x2 >= 1\n"));
        let (back, obj2) = parse_lp(&text).unwrap();
        assert_eq!(back, triangle());
        assert_eq!(obj2, obj);
    }

    #[test]
    fn decimals_and_scaling() {
        assert_eq!(decimal(&Rational::new(1, 4)), "0.25");
        assert_eq!(decimal(&Rational::new(-3, 8)), "-0.375");
        assert_eq!(decimal(&Rational::new(21, 20)), "1.05");
        let mut s = LinearSystem::new();
        s.add_unit_var("a");
        s.add_var("b", Rational::new(1, 3), Rational::new(1, 3));
        s.push_row(vec![(0, Rational::new(1, 3)), (1, Rational::new(1, 2))], Sense::Le, Rational::one());
        let text = export_lp(&s, &[], ExportOptions { fixed_as_equal: true });
        assert!(text.contains("R1: 2 a + 3 b <= 6"), "{text}");
        assert!(text.contains("B1: 3 b >= 1"), "{text}");
        let (back, _) = parse_lp(&text).unwrap();
        assert_eq!(back.var(1).lower, Rational::new(1, 3));
        assert_eq!(back.var(1).upper, Rational::new(1, 3));
    }

    #[test]
    fn fixed_as_equal() {
        let mut s = LinearSystem::new();
        s.add_var("x1", Rational::new(1, 2), Rational::new(1, 2));
        let text = export_lp(&s, &[], ExportOptions { fixed_as_equal: true });
        assert!(text.contains(" x1 = 0.5\n"));
        let (back, _) = parse_lp(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_lp("Minimize\n obj: x\nSubject To\n").is_err());
        assert!(parse_lp("Minimize\n obj: x\nSubject To\n R1: x >= 1\nBounds\nEnd\n").is_err());
    }

    proptest! {
        #[test]
        fn decimal_rows_round_trip(
            rows in prop::collection::vec(
                (prop::collection::vec((0usize..5, -40i64..40), 1..5), 0u8..3, -20i64..20),
                0..8),
        ) {
            let mut s = LinearSystem::new();
            for j in 0..5 {
                s.add_unit_var(format!("v{j}"));
            }
            for (terms, sense, rhs) in rows {
                let sense = [Sense::Ge, Sense::Le, Sense::Eq][sense as usize];
                s.push_row(terms.into_iter().map(|(v, c)| (v, Rational::new(c, 4))), sense, Rational::new(rhs, 8));
            }
            let obj = vec![(1, Rational::new(3, 10)), (4, Rational::from(-2))];
            let text = export_lp(&s, &obj, ExportOptions::default());
            let (back, obj2) = parse_lp(&text).unwrap();
            prop_assert_eq!(back, s);
            prop_assert_eq!(obj2, obj);
        }
    }
}
