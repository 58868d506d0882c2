//! JSON grammar for operators.
//!
//! ```text
//! {"type":"linear","matrix":[[..],..]}
//! {"type":"sup"|"inf","members":[matrix | {"type":"linear",..}, ..]}
//! {"type":"minmax","rows":[ row: [ action: [ reply: [..n..], ..], ..], ..]}
//! {"type":"maxplus","weights":[[number | "-inf", ..], ..]}
//! {"type":"perturbed","base":op,"s":number,"u":[..],"gauge":{"kind":"unorm"} | {"kind":"functional","weights":[..]}}
//! {"type":"power","base":op,"m":int}
//! {"type":"wholespace","base":op}
//! ```
//! `u` defaults to the all-ones vector and `gauge` to the `u`-norm.

use serde_json::{json, Value};

use super::{default_gauge, NonnegMatrix, OperatorSpec};
use crate::cone::{ConeVector, Gauge, SliceConfig};
use crate::error::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidOperator(msg.into())
}

fn field<'a>(obj: &'a Value, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| invalid(format!("missing field \"{name}\"")))
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| invalid(format!("{what} must be a number")))
}

fn vector(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("{what} must be an array")))?
        .iter()
        .map(|e| number(e, what))
        .collect()
}

fn matrix(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("{what} must be an array of rows")))?
        .iter()
        .map(|r| vector(r, what))
        .collect()
}

fn weight(v: &Value) -> Result<f64> {
    match v {
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        Value::Number(_) => number(v, "weight"),
        _ => Err(invalid("max-plus weight must be a number or \"-inf\"")),
    }
}

fn member(v: &Value) -> Result<NonnegMatrix> {
    match v {
        Value::Array(_) => NonnegMatrix::new(matrix(v, "member")?),
        Value::Object(_) => match parse_operator(v)? {
            OperatorSpec::Linear(a) => Ok(a),
            other => Err(invalid(format!("family members must be linear, got {}", other.kind()))),
        },
        _ => Err(invalid("family member must be a matrix or a linear operator")),
    }
}

pub(crate) fn parse_gauge(v: Option<&Value>) -> Result<Gauge> {
    match v {
        None | Some(Value::Null) => Ok(default_gauge()),
        Some(g) => serde_json::from_value(g.clone()).map_err(|e| invalid(format!("bad gauge: {e}"))),
    }
}

pub(crate) fn parse_operator(v: &Value) -> Result<OperatorSpec> {
    let kind = field(v, "type")?.as_str().ok_or_else(|| invalid("\"type\" must be a string"))?;
    match kind {
        "linear" => OperatorSpec::linear(matrix(field(v, "matrix")?, "matrix")?),
        "sup" | "inf" => {
            let members = field(v, "members")?
                .as_array()
                .ok_or_else(|| invalid("\"members\" must be an array"))?
                .iter()
                .map(member)
                .collect::<Result<Vec<_>>>()?;
            if kind == "sup" {
                OperatorSpec::sup(members)
            } else {
                OperatorSpec::inf(members)
            }
        }
        "minmax" => {
            let rows = field(v, "rows")?
                .as_array()
                .ok_or_else(|| invalid("\"rows\" must be an array"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| invalid("each minmax row must be an array of actions"))?
                        .iter()
                        .map(|action| matrix(action, "minmax action"))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            OperatorSpec::minmax(rows)
        }
        "maxplus" => {
            let weights = field(v, "weights")?
                .as_array()
                .ok_or_else(|| invalid("\"weights\" must be an array of rows"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| invalid("weight row must be an array"))?
                        .iter()
                        .map(weight)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            OperatorSpec::maxplus(weights)
        }
        "perturbed" => {
            let base = parse_operator(field(v, "base")?)?;
            let s = number(field(v, "s")?, "s")?;
            let unit = match v.get("u") {
                Some(u) => ConeVector::interior(vector(u, "u")?)?,
                None => ConeVector::ones(base.dim()),
            };
            let slice = SliceConfig::new(parse_gauge(v.get("gauge"))?, unit)?;
            OperatorSpec::perturbed(base, s, slice)
        }
        "power" => {
            let base = parse_operator(field(v, "base")?)?;
            let m = field(v, "m")?.as_u64().ok_or_else(|| invalid("\"m\" must be a positive integer"))?;
            OperatorSpec::power(base, m as usize)
        }
        "wholespace" => OperatorSpec::whole_space(parse_operator(field(v, "base")?)?),
        other => Err(invalid(format!("unknown operator type \"{other}\""))),
    }
}

fn weight_json(w: f64) -> Value {
    if w == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(w)
    }
}

pub(crate) fn operator_to_json(spec: &OperatorSpec) -> Value {
    match spec {
        OperatorSpec::Linear(a) => json!({"type": "linear", "matrix": a.rows()}),
        OperatorSpec::Sup(f) | OperatorSpec::Inf(f) => json!({
            "type": spec.kind(),
            "members": f.members().iter().map(|m| m.rows()).collect::<Vec<_>>(),
        }),
        OperatorSpec::MinMax(g) => json!({"type": "minmax", "rows": g.rows()}),
        OperatorSpec::MaxPlus(w) => json!({
            "type": "maxplus",
            "weights": w.weights().into_iter()
                .map(|r| r.into_iter().map(weight_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        OperatorSpec::Perturbed(p) => json!({
            "type": "perturbed",
            "base": operator_to_json(p.base()),
            "s": p.s(),
            "u": p.slice().unit().coords(),
            "gauge": serde_json::to_value(p.slice().gauge()).expect("gauge serializes"),
        }),
        OperatorSpec::Power(p) => json!({"type": "power", "base": operator_to_json(p.base()), "m": p.exponent()}),
        OperatorSpec::WholeSpace(w) => json!({"type": "wholespace", "base": operator_to_json(w.base())}),
    }
}
