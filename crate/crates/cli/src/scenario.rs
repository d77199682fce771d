//! Scenario files: a JSON document describing a torus, an endomorphism and
//! optional named sublattices. Every number is a decimal integer or a `"p/q"`
//! string; binary floats are rejected.
//!
//! ```json
//! {
//!   "torus": { "n": 1, "J": [["0", "-1"], ["1", "0"]] },
//!   "endomorphism": { "M": [["2", "0"], ["0", "2"]], "tau": ["1/2", "0"] },
//!   "sublattices": { "first_factor": [["1", "0"]] },
//!   "budgets": { "ample": 10000, "torsion": 1000000, "orbit": 64 },
//!   "precision": "1/1000000000000"
//! }
//! ```
//!
//! `J` is the rational part of the complex structure. For structures over
//! `Q(sqrt D)` add `"J_sqrt": { "radicand": D, "matrix": [...] }`, giving
//! `J = J + sqrt(D) * J_sqrt.matrix`. Sublattices are lists of columns.

use std::collections::BTreeMap;
use std::fmt;

use abdyn::endo::{make_endo, TorusEndomorphism};
use abdyn::exactnum::scalar::parse_rational;
use abdyn::matlin::{IntMatrix, Matrix, RationalMatrix};
use abdyn::torus::make_torus_quadratic;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

/// An exact number as written in a scenario file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub BigRational);

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExactVisitor;

        impl Visitor<'_> for ExactVisitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(BigRational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(BigRational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
                Err(E::custom(format!("binary float {v} is not allowed; write it as a \"p/q\" string")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v)
                    .map(Exact)
                    .ok_or_else(|| E::custom(format!("'{v}' is not an integer or \"p/q\" rational")))
            }
        }

        d.deserialize_any(ExactVisitor)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqrtPart {
    pub radicand: u32,
    pub matrix: Vec<Vec<Exact>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    pub n: usize,
    #[serde(rename = "J")]
    pub j: Vec<Vec<Exact>>,
    #[serde(rename = "J_sqrt", default, skip_serializing_if = "Option::is_none")]
    pub j_sqrt: Option<SqrtPart>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoSpec {
    #[serde(rename = "M")]
    pub m: Vec<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<Exact>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub torus: TorusSpec,
    pub endomorphism: EndoSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sublattices: BTreeMap<String, Vec<Vec<Exact>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Budgets>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<Exact>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub endo: TorusEndomorphism,
    pub sublattices: BTreeMap<String, IntMatrix>,
    pub budgets: Budgets,
    pub precision: Option<BigRational>,
}

fn rational_matrix(rows: &[Vec<Exact>], what: &str) -> Result<RationalMatrix, Failure> {
    let rows: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    Matrix::from_rows(rows).map_err(|_| Failure::validation("domain", format!("{what}: rows have different lengths")))
}

fn integer(x: &Exact, what: &str) -> Result<BigInt, Failure> {
    if x.0.is_integer() {
        Ok(x.0.to_integer())
    } else {
        Err(Failure::validation("domain", format!("{what}: entry {} is not an integer", x.0)))
    }
}

fn integer_matrix(rows: &[Vec<Exact>], what: &str) -> Result<IntMatrix, Failure> {
    let m = rational_matrix(rows, what)?;
    m.to_integer().ok_or_else(|| Failure::validation("domain", format!("{what}: entries must be integers")))
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<Scenario, Failure> {
        let d = 2 * self.torus.n;
        let a = rational_matrix(&self.torus.j, "torus.J")?;
        if a.rows() != d || a.cols() != d {
            return Err(Failure::validation("domain", format!("torus.J must be {d}x{d} for n = {}", self.torus.n)));
        }
        let (b, radicand) = match &self.torus.j_sqrt {
            Some(s) => (rational_matrix(&s.matrix, "torus.J_sqrt.matrix")?, s.radicand),
            None => (RationalMatrix::zeros(d, d), 1),
        };
        let torus = make_torus_quadratic(a, b, radicand)?;
        let m = integer_matrix(&self.endomorphism.m, "endomorphism.M")?;
        if m.rows() != d || m.cols() != d {
            return Err(Failure::validation("domain", format!("endomorphism.M must be {d}x{d}")));
        }
        let tau = match &self.endomorphism.tau {
            Some(t) => t.iter().map(|x| x.0.clone()).collect(),
            None => vec![BigRational::from_integer(0.into()); d],
        };
        let endo = make_endo(&torus, m, tau)?;
        let mut sublattices = BTreeMap::new();
        for (name, cols) in &self.sublattices {
            let what = format!("sublattices.{name}");
            if cols.iter().any(|c| c.len() != d) {
                return Err(Failure::validation("domain", format!("{what}: columns must have length {d}")));
            }
            let cols: Vec<Vec<BigInt>> =
                cols.iter().map(|c| c.iter().map(|x| integer(x, &what)).collect()).collect::<Result<_, _>>()?;
            sublattices.insert(name.clone(), IntMatrix::from_cols(d, &cols));
        }
        Ok(Scenario {
            endo,
            sublattices,
            budgets: self.budgets.clone().unwrap_or_default(),
            precision: self.precision.as_ref().map(|p| p.0.clone()),
        })
    }

    /// The scenario file describing `f`, so any sample can be replayed.
    pub fn from_endo(f: &TorusEndomorphism, sublattices: &BTreeMap<String, IntMatrix>) -> Self {
        let exact_rows = |m: &RationalMatrix| -> Vec<Vec<Exact>> {
            m.to_rows().into_iter().map(|r| r.into_iter().map(Exact).collect()).collect()
        };
        let t = f.torus();
        let j_sqrt =
            (t.radicand() > 1).then(|| SqrtPart { radicand: t.radicand(), matrix: exact_rows(t.j_sqrt_part()) });
        ScenarioFile {
            torus: TorusSpec { n: t.dim(), j: exact_rows(t.j_rational_part()), j_sqrt },
            endomorphism: EndoSpec {
                m: exact_rows(&f.matrix().to_rational()),
                tau: Some(f.tau().iter().cloned().map(Exact).collect()),
            },
            sublattices: sublattices
                .iter()
                .map(|(k, m)| {
                    let cols = m
                        .to_cols()
                        .into_iter()
                        .map(|c| c.into_iter().map(|x| Exact(BigRational::from_integer(x))).collect())
                        .collect();
                    (k.clone(), cols)
                })
                .collect(),
            budgets: None,
            precision: None,
        }
    }
}
