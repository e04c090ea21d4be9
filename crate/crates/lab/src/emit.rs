//! Report envelopes, schema checks and the json/csv/text renderings.
//!
//! Every emitted document has the shape
//!
//! ```text
//! { "schema": "detlab-report/1", "command": str, "status": str,
//!   "environment": { "primes": [int], "levels": [int], "seed": int, "budget": int, ... },
//!   "result": object }
//! ```
//!
//! The csv rendering lists every leaf of the json document as a
//! `path,value` row, so both carry the same numbers.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::error::{LabError, LabResult};

pub const SCHEMA: &str = "detlab-report/1";

pub const STATUSES: [&str; 6] = ["COMPUTED", "PASS", "FAIL", "FAILED", "AMBIGUOUS", "SKIPPED_BUDGET"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Settings a report was produced under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Environment {
    pub primes: Vec<u32>,
    pub levels: Vec<u32>,
    pub seed: u64,
    pub budget: u64,
}

impl Environment {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "primes": self.primes,
            "levels": self.levels,
            "seed": self.seed,
            "budget": self.budget,
        })
    }
}

pub fn envelope(command: &str, status: &str, env: &Environment, result: Value) -> Value {
    serde_json::json!({
        "schema": SCHEMA,
        "command": command,
        "status": status,
        "environment": env.to_json(),
        "result": result,
    })
}

fn expect<'a>(obj: &'a Map<String, Value>, key: &str) -> LabResult<&'a Value> {
    obj.get(key).ok_or_else(|| LabError::Schema(format!("missing `{key}`")))
}

fn int_list(v: &Value, what: &str) -> LabResult<()> {
    match v.as_array() {
        Some(a) if a.iter().all(Value::is_u64) => Ok(()),
        _ => Err(LabError::Schema(format!("`{what}` must be a list of non-negative integers"))),
    }
}

/// Exact rationals must parse and agree with their decimal field.
fn check_rationals(v: &Value, path: &str) -> LabResult<()> {
    match v {
        Value::Object(o) => {
            if let (Some(Value::String(e)), Some(d)) = (o.get("exact"), o.get("decimal")) {
                let (p, q) = e
                    .split_once('/')
                    .ok_or_else(|| LabError::Schema(format!("{path}: `{e}` is not p/q")))?;
                let p = f64::from_str(p).map_err(|_| LabError::Schema(format!("{path}: bad numerator in `{e}`")))?;
                let q = f64::from_str(q).map_err(|_| LabError::Schema(format!("{path}: bad denominator in `{e}`")))?;
                let d = d.as_f64().ok_or_else(|| LabError::Schema(format!("{path}: decimal is not a number")))?;
                if q == 0.0 || ((p / q) - d).abs() > 1e-9 * d.abs().max(1.0) {
                    return Err(LabError::Schema(format!("{path}: decimal {d} does not match {e}")));
                }
            }
            for (k, x) in o {
                check_rationals(x, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        Value::Array(a) => a
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| check_rationals(x, &format!("{path}.{i}"))),
        _ => Ok(()),
    }
}

/// Checks a document against the report schema.
pub fn validate(doc: &Value) -> LabResult<()> {
    let obj = doc.as_object().ok_or_else(|| LabError::Schema("report is not an object".into()))?;
    if expect(obj, "schema")?.as_str() != Some(SCHEMA) {
        return Err(LabError::Schema(format!("`schema` must be {SCHEMA}")));
    }
    if !expect(obj, "command")?.is_string() {
        return Err(LabError::Schema("`command` must be a string".into()));
    }
    match expect(obj, "status")?.as_str() {
        Some(s) if STATUSES.contains(&s) => {}
        _ => return Err(LabError::Schema(format!("`status` must be one of {STATUSES:?}"))),
    }
    let env = expect(obj, "environment")?
        .as_object()
        .ok_or_else(|| LabError::Schema("`environment` must be an object".into()))?;
    int_list(expect(env, "primes")?, "environment.primes")?;
    int_list(expect(env, "levels")?, "environment.levels")?;
    for key in ["seed", "budget"] {
        if !expect(env, key)?.is_u64() {
            return Err(LabError::Schema(format!("`environment.{key}` must be a non-negative integer")));
        }
    }
    if !expect(obj, "result")?.is_object() {
        return Err(LabError::Schema("`result` must be an object".into()));
    }
    check_rationals(doc, "$")
}

/// Leaves of a json document as `(path, value)` pairs in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, path: &mut String, out: &mut Vec<(String, String)>) {
        let mut child = |key: &str, x: &Value, path: &mut String| {
            let len = path.len();
            if !path.is_empty() {
                path.push('.');
            }
            path.push_str(key);
            walk(x, path, out);
            path.truncate(len);
        };
        match v {
            Value::Object(o) => o.iter().for_each(|(k, x)| child(k, x, path)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| child(&i.to_string(), x, path)),
            Value::String(s) => out.push((path.clone(), s.clone())),
            other => out.push((path.clone(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk(v, &mut String::new(), &mut out);
    out
}

/// Validates the document, checks that it survives a json round trip, and renders it.
pub fn render(doc: &Value, format: Format) -> LabResult<String> {
    validate(doc)?;
    let json = serde_json::to_string_pretty(doc).map_err(|e| LabError::Schema(e.to_string()))?;
    let back: Value = serde_json::from_str(&json).map_err(|e| LabError::Schema(e.to_string()))?;
    if &back != doc {
        return Err(LabError::Schema("report does not survive a json round trip".into()));
    }
    Ok(match format {
        Format::Json => json + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| LabError::Io(e.to_string());
            w.write_record(["path", "value"]).map_err(io)?;
            for (p, v) in flatten(doc) {
                w.write_record([p, v]).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| LabError::Io(e.to_string()))?
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}: {}", doc["command"].as_str().unwrap_or(""), doc["status"].as_str().unwrap_or(""));
            for (p, v) in flatten(doc) {
                if p != "command" && p != "status" && p != "schema" {
                    let _ = writeln!(s, "  {p} = {v}");
                }
            }
            s
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn env() -> Environment {
        Environment {
            primes: vec![3, 5],
            levels: vec![2],
            seed: 0,
            budget: 10,
        }
    }

    #[test]
    fn validation() {
        let ok = envelope("lct", "COMPUTED", &env(), json!({"x": {"exact": "1/2", "decimal": 0.5}}));
        assert!(validate(&ok).is_ok());
        let bad = envelope("lct", "COMPUTED", &env(), json!({"x": {"exact": "1/2", "decimal": 0.4}}));
        assert!(validate(&bad).is_err());
        let bad = envelope("lct", "DONE", &env(), json!({}));
        assert!(validate(&bad).is_err());
        let mut bad = ok.clone();
        bad["environment"].as_object_mut().unwrap().remove("seed");
        assert!(validate(&bad).is_err());
    }

    #[test]
    fn csv_and_json_carry_the_same_leaves() {
        let doc = envelope("x", "PASS", &env(), json!({"a": [1, {"b": "p,q"}], "c": null, "d": 2.5}));
        let csv = render(&doc, Format::Csv).unwrap();
        let mut r = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<(String, String)> = r
            .records()
            .map(|x| {
                let x = x.unwrap();
                (x[0].to_string(), x[1].to_string())
            })
            .collect();
        assert_eq!(rows, flatten(&doc));
        assert!(rows.contains(&("result.a.1.b".into(), "p,q".into())));
        assert!(rows.contains(&("result.d".into(), "2.5".into())));
    }
}
