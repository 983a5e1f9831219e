//! Exact rational numbers.
//!
//! Values that fit in a pair of machine words stay on a fast path backed by
//! `Ratio<i64>`; anything that overflows is promoted to a `BigRational`. The
//! representation is canonical (a value is `Small` whenever it fits), so
//! derived equality and hashing are sound.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

/// An exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn fits(v: i64) -> bool {
    v != i64::MIN
}

impl Rational {
    fn small(r: Ratio<i64>) -> Self {
        if fits(*r.numer()) && fits(*r.denom()) {
            Rational(Repr::Small(r))
        } else {
            Self::from_big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if fits(n) && fits(d) => Rational(Repr::Small(Ratio::new_raw(n, d))),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(r) => r.clone(),
        }
    }

    /// Builds `numer / denom`, reducing to lowest terms. Panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_big(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_one(),
            Repr::Big(_) => false,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => r.numer().signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(Integer::div_floor(r.numer(), r.denom())),
            Repr::Big(r) => r.floor().to_integer(),
        }
    }

    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(-Integer::div_floor(&-r.numer(), r.denom())),
            Repr::Big(r) => r.ceil().to_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(r) => Self::small(r.recip()),
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Lossy conversion, for human-facing summaries only.
    pub fn to_f64_lossy(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(c) = a.checked_add(b) {
                return Self::small(c);
            }
        }
        Self::from_big(self.to_big() + rhs.to_big())
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(c) = a.checked_sub(b) {
                return Self::small(c);
            }
        }
        Self::from_big(self.to_big() - rhs.to_big())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(c) = a.checked_mul(b) {
                return Self::small(c);
            }
        }
        Self::from_big(self.to_big() * rhs.to_big())
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(c) = a.checked_div(b) {
                return Self::small(c);
            }
        }
        Self::from_big(self.to_big() / rhs.to_big())
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::small(Ratio::from_integer(v))
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Self::from(v as i64)
    }
}

impl From<u64> for Rational {
    fn from(v: u64) -> Self {
        Self::from_big(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Self::from(v as u64)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $imp:ident, $atrait:ident, $amethod:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$imp(rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$imp(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$imp(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$imp(&rhs)
            }
        }
        impl $atrait<&Rational> for Rational {
            fn $amethod(&mut self, rhs: &Rational) {
                *self = self.$imp(rhs);
            }
        }
        impl $atrait<Rational> for Rational {
            fn $amethod(&mut self, rhs: Rational) {
                *self = self.$imp(&rhs);
            }
        }
    };
}

binop!(Add, add, add_ref, AddAssign, add_assign);
binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
binop!(Div, div, div_ref, DivAssign, div_assign);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            // the i64::MIN guard in `small` keeps this negation in range
            Repr::Small(r) => Rational(Repr::Small(-r)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, v| acc + v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"a"`, `"a/b"` and plain decimals such as `"-0.25"`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Rational::from_bigints(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.starts_with('-');
            let digits = int.trim_start_matches(['-', '+']);
            if (digits.is_empty() && frac.is_empty())
                || !digits.chars().all(|c| c.is_ascii_digit())
                || !frac.chars().all(|c| c.is_ascii_digit())
            {
                return Err(bad());
            }
            let whole: BigInt = format!("{digits}{frac}").parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let v = Rational::from_bigints(whole, scale);
            return Ok(if negative { -v } else { v });
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from(n))
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(deserializer)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("expected a rational, got {other}"))),
        }
    }
}
