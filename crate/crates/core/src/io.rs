//! JSON formats. Indices are 1-based and rationals are strings such as
//! `"1/3"`; decimals and plain numbers are accepted on input.
//!
//! ```json
//! {"kind":"setcover","n":3,"rows":[[1,2],[1,3],[2,3]]}
//! {"kind":"minknap","weights":[10,10,5,6,7],"rhs":10}
//! ["1/2","0","0.25"]
//! {"coeffs":["2","2","1"],"rhs":"2"}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{FractionalPoint, Inequality};
use crate::instance::{CoverInstance, KnapsackInstance};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    SetCover(CoverInstance),
    MinKnap(KnapsackInstance),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawInstance {
    Setcover { n: usize, rows: Vec<Vec<usize>> },
    Minknap { weights: Vec<u64>, rhs: u64 },
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Instance::SetCover(a) => RawInstance::Setcover {
                n: a.n(),
                rows: a.rows().iter().map(|r| r.iter().map(|j| j + 1).collect()).collect(),
            },
            Instance::MinKnap(k) => RawInstance::Minknap { weights: k.weights().to_vec(), rhs: k.rhs() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match RawInstance::deserialize(d)? {
            RawInstance::Setcover { n, rows } => CoverInstance::from_one_based(n, &rows).map(Instance::SetCover),
            RawInstance::Minknap { weights, rhs } => KnapsackInstance::new(weights, rhs).map(Instance::MinKnap),
        }
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInequality {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Serialize for Inequality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawInequality { coeffs: self.coeffs().to_vec(), rhs: self.rhs().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Inequality {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawInequality::deserialize(d)?;
        Inequality::new(raw.coeffs, raw.rhs).map_err(D::Error::custom)
    }
}

impl Serialize for FractionalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FractionalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        FractionalPoint::new(Vec::<Rational>::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable value")
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    read_json(path)
}

pub fn read_cover(path: impl AsRef<Path>) -> Result<CoverInstance> {
    match read_instance(path)? {
        Instance::SetCover(a) => Ok(a),
        Instance::MinKnap(_) => Err(Error::InvalidInstance("expected a set-covering instance".into())),
    }
}

pub fn read_knapsack(path: impl AsRef<Path>) -> Result<KnapsackInstance> {
    match read_instance(path)? {
        Instance::MinKnap(k) => Ok(k),
        Instance::SetCover(_) => Err(Error::InvalidInstance("expected a minimum-knapsack instance".into())),
    }
}
