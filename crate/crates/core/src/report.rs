//! Run reports, CSV export and command-line value parsing.
//!
//! A report is one JSON object with keys in a fixed order. Floats are
//! written with 17 significant digits so that a report can be diffed
//! byte for byte against a rerun. JSON has no infinities; infinite values
//! are stored as the strings `"inf"` and `"-inf"` (see [`num`]).

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Schema version written into every report.
pub const SCHEMA_VERSION: &str = "clarke-kit-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Every parameter of the run, defaults included.
    pub inputs: Value,
    pub outputs: Value,
    /// Verdict against a reference, when one exists.
    pub pass_fail: Option<bool>,
    pub versions: Value,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, outputs: Value, pass_fail: Option<bool>) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            outputs,
            pass_fail,
            versions: serde_json::json!({
                "schema": SCHEMA_VERSION,
                "clarke_kit": env!("CARGO_PKG_VERSION"),
            }),
        }
    }

    /// Serialized form, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut out = to_json_string(self);
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Compact formatter that writes every float as `{:.16e}`.
struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes on one line with 17-significant-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// A float as JSON, with infinities as `"inf"` / `"-inf"` and NaN as null.
pub fn num(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
    }
}

pub fn vector_json(v: &Vector) -> Value {
    Value::Array(v.coords().iter().map(|&x| num(x)).collect())
}

pub fn vectors_json(vs: &[Vector]) -> Value {
    Value::Array(vs.iter().map(vector_json).collect())
}

/// CSV with header `index,coord_0,...,coord_{n-1}`; all points must share
/// one dimension.
pub fn to_csv(points: &[Vector]) -> Result<String> {
    let Some(first) = points.first() else {
        return Ok("index\n".to_string());
    };
    let dim = first.dim();
    let mut out = String::from("index");
    for j in 0..dim {
        out.push_str(&format!(",coord_{j}"));
    }
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        p.check_dim(dim)?;
        out.push_str(&i.to_string());
        for x in p.coords() {
            out.push_str(&format!(",{x:.16e}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses `1.5,-2,3e-4`: comma-separated finite decimals, no spaces.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    if text.is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    text.split(',')
        .map(|tok| {
            if tok.is_empty() || tok.bytes().any(|b| b.is_ascii_whitespace()) {
                return Err(Error::Parse(format!("bad number {tok:?}")));
            }
            let x: f64 = tok.parse().map_err(|_| Error::Parse(format!("bad number {tok:?}")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Parse(format!("non-finite number {tok:?}")))
            }
        })
        .collect()
}

pub fn parse_vector(text: &str) -> Result<Vector> {
    Vector::new(parse_list(text)?)
}

/// Parses `;`-separated vectors of equal dimension, e.g. `1,0;0,1`.
pub fn parse_vectors(text: &str) -> Result<Vec<Vector>> {
    let vs: Vec<Vector> = text.split(';').map(parse_vector).collect::<Result<_>>()?;
    let dim = vs[0].dim();
    for v in &vs {
        v.check_dim(dim)?;
    }
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_17_digits() {
        let s = to_json_string(&json!({"a": 0.1, "b": [1.0, -2.5e-300]}));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("1.0000000000000000e0"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
        assert_eq!(back["b"][1].as_f64(), Some(-2.5e-300));
    }

    #[test]
    fn key_order_is_fixed() {
        let r = RunReport::new("x", json!({"z": 1, "a": 2}), json!(null), None);
        let s = r.to_json();
        let keys = ["\"command\"", "\"inputs\"", "\"z\"", "\"a\"", "\"outputs\"", "\"pass_fail\"", "\"versions\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
        assert_eq!(RunReport::from_json(&s).unwrap(), r);
    }

    #[test]
    fn infinities_as_strings() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_vector("0,0").unwrap(), Vector::from([0.0, 0.0]));
        assert_eq!(parse_list("1e-2,-3").unwrap(), vec![0.01, -3.0]);
        for bad in ["", "1,", ",1", "1, 2", " 1", "inf", "nan", "1;2", "a"] {
            assert!(parse_list(bad).is_err(), "{bad:?}");
        }
        assert_eq!(parse_vectors("1,0;0,1").unwrap().len(), 2);
        assert!(parse_vectors("1,0;1").is_err());
    }

    #[test]
    fn csv_header() {
        let csv = to_csv(&[[1.0, 2.0].into(), [3.0, 4.0].into()]).unwrap();
        assert!(csv.starts_with("index,coord_0,coord_1\n0,1.0000000000000000e0,"));
        assert_eq!(csv.lines().count(), 3);
    }
}
