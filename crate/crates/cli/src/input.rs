use std::fs;

use njump_core::number::parse_rational;
use njump_core::spec::RatStr;
use njump_core::{BodySpec, LatticePoint, NewtonBody, Rational};
use serde::de::{DeserializeOwned, IgnoredAny};
use serde::Deserialize;
use serde_json::Value;

use crate::commands::CliError;

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_string(), e.to_string()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Json {
        file: path.to_string(),
        field: e.path().to_string(),
        reason: e.inner().to_string(),
    })
}

pub fn load_body(path: &str) -> Result<NewtonBody, CliError> {
    let value: Value = read_json(path)?;
    let spec = body_spec(&value, "").map_err(|(field, reason)| CliError::Json {
        file: path.to_string(),
        field: if field.is_empty() { ".".into() } else { field },
        reason,
    })?;
    spec.to_body().map_err(|e| CliError::Body(path.to_string(), e))
}

type FieldError = (String, String);

/// Deserializes one level with field paths, prefixed by `at`.
fn fields<T: DeserializeOwned>(v: &Value, at: &str) -> Result<T, FieldError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (at.is_empty(), inner.as_str()) {
            (_, ".") => at.to_string(),
            (true, p) => p.to_string(),
            (false, p) => format!("{at}.{p}"),
        };
        (path, e.inner().to_string())
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Polyhedral {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    vertices: Vec<[RatStr; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Hyperbola {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    a: RatStr,
    b: RatStr,
    s: RatStr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Diagonal {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    m: Vec<RatStr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Scale {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    c: RatStr,
    body: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sum {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    bodies: Vec<Value>,
}

fn body_spec(v: &Value, at: &str) -> Result<BodySpec, FieldError> {
    let join = |k: &str| if at.is_empty() { k.to_string() } else { format!("{at}.{k}") };
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| (join("kind"), "missing or non-string body kind".to_string()))?;
    Ok(match kind {
        "polyhedral" => BodySpec::Polyhedral {
            vertices: fields::<Polyhedral>(v, at)?.vertices,
        },
        "hyperbola" => {
            let h: Hyperbola = fields(v, at)?;
            BodySpec::Hyperbola { a: h.a, b: h.b, s: h.s }
        }
        "diagonal" => BodySpec::Diagonal {
            m: fields::<Diagonal>(v, at)?.m,
        },
        "scale" => {
            let sc: Scale = fields(v, at)?;
            BodySpec::Scale {
                c: sc.c,
                body: Box::new(body_spec(&sc.body, &join("body"))?),
            }
        }
        "sum" => {
            let sum: Sum = fields(v, at)?;
            let bodies = sum
                .bodies
                .iter()
                .enumerate()
                .map(|(i, b)| body_spec(b, &format!("{}[{i}]", join("bodies"))))
                .collect::<Result<_, _>>()?;
            BodySpec::Sum { bodies }
        }
        "canonical" => fields::<BodySpec>(v, at)?,
        other => return Err((join("kind"), format!("unknown body kind `{other}`"))),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    c: String,
    a: [u64; 2],
}

/// Cases file: `[{"c": "3/2", "a": [1, 0]}, ...]`.
pub fn load_cases(path: &str) -> Result<Vec<(Rational, LatticePoint)>, CliError> {
    let raw: Vec<RawCase> = read_json(path)?;
    raw.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let c = parse_rational(&r.c).map_err(|e| CliError::Json {
                file: path.to_string(),
                field: format!("[{i}].c"),
                reason: e.to_string(),
            })?;
            Ok((c, LatticePoint::new(r.a[0], r.a[1])))
        })
        .collect()
}
