//! JSON body specifications.
//!
//! ```json
//! {"kind":"polyhedral","vertices":[["1","2"],["3","1"]]}
//! {"kind":"hyperbola","a":"1","b":"1","s":"1"}
//! {"kind":"diagonal","m":["2","3"]}
//! {"kind":"scale","c":"3/2","body":{...}}
//! {"kind":"sum","bodies":[{...},{...}]}
//! ```
//!
//! A normalized body serializes as `{"kind":"canonical", ...}` and parses back
//! to the same body.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::body::{minkowski_sum, NewtonBody};
use crate::error::BodyError;
use crate::number::{format_rational, parse_rational, Rational};

/// A rational written as a string such as `"3/2"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rational);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(RatStr).map_err(de::Error::custom)
    }
}

impl From<Rational> for RatStr {
    fn from(q: Rational) -> Self {
        RatStr(q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Polyhedral {
        vertices: Vec<[RatStr; 2]>,
    },
    Hyperbola {
        a: RatStr,
        b: RatStr,
        s: RatStr,
    },
    Diagonal {
        m: Vec<RatStr>,
    },
    Scale {
        c: RatStr,
        body: Box<BodySpec>,
    },
    Sum {
        bodies: Vec<BodySpec>,
    },
    Canonical(NewtonBody),
}

impl BodySpec {
    pub fn polyhedral(vertices: &[(Rational, Rational)]) -> Self {
        BodySpec::Polyhedral {
            vertices: vertices
                .iter()
                .map(|(x, y)| [RatStr(x.clone()), RatStr(y.clone())])
                .collect(),
        }
    }

    pub fn hyperbola(a: Rational, b: Rational, s: Rational) -> Self {
        BodySpec::Hyperbola {
            a: a.into(),
            b: b.into(),
            s: s.into(),
        }
    }

    pub fn to_body(&self) -> Result<NewtonBody, BodyError> {
        from_spec(self)
    }
}

pub fn from_spec(spec: &BodySpec) -> Result<NewtonBody, BodyError> {
    match spec {
        BodySpec::Polyhedral { vertices } => {
            let pts: Vec<(Rational, Rational)> = vertices
                .iter()
                .map(|[x, y]| (x.0.clone(), y.0.clone()))
                .collect();
            NewtonBody::polyhedral(&pts)
        }
        BodySpec::Hyperbola { a, b, s } => NewtonBody::hyperbola(a.0.clone(), b.0.clone(), s.0.clone()),
        BodySpec::Diagonal { m } => match m.as_slice() {
            [m1, m2] => NewtonBody::diagonal(m1.0.clone(), m2.0.clone()),
            _ => Err(BodyError::Malformed(format!(
                "diagonal body needs exactly two exponents, got {}",
                m.len()
            ))),
        },
        BodySpec::Scale { c, body } => from_spec(body)?.scale(&c.0),
        BodySpec::Sum { bodies } => {
            let mut parts = bodies.iter().map(from_spec);
            let first = parts
                .next()
                .ok_or_else(|| BodyError::Malformed("sum of no bodies".into()))??;
            parts.try_fold(first, |acc, b| minkowski_sum(&acc, &b?))
        }
        BodySpec::Canonical(body) => Ok(body.clone()),
    }
}

/// Canonical JSON for a body; parses back to an equal body.
pub fn to_canonical_json(body: &NewtonBody) -> String {
    serde_json::to_string_pretty(&BodySpec::Canonical(body.clone())).expect("bodies always serialize")
}

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}
