//! JSON encoding of exact and numeric values.

use bcurve_core::spectral::{DivisorPoint, PlaneCurve};
use bcurve_core::{ComplexFloat, DiffOp, ExactScalar, TaylorSeries};
use num_rational::BigRational;
use serde_json::{json, Value};

pub const SCHEMA: &str = "bcurve/1";

pub fn rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn scalar(c: &ExactScalar) -> Value {
    json!([rational(&c.re), rational(&c.im)])
}

// rounded so that last-bit noise does not reach the output
fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r = (x * 1e10).round() / 1e10;
    json!(if r == 0.0 { 0.0 } else { r })
}

pub fn complex(z: ComplexFloat) -> Value {
    json!([real(z.re), real(z.im)])
}

/// `[[i, j, re, im], …]` sorted by `(i, j)`; `i` is the power of `λ`.
pub fn terms(curve: &PlaneCurve) -> Value {
    let mut t: Vec<_> = curve.f.terms().map(|(&(i, j), c)| (i, j, c.clone())).collect();
    t.sort_by_key(|&(i, j, _)| (i, j));
    Value::Array(t.into_iter().map(|(i, j, c)| json!([i, j, rational(&c.re), rational(&c.im)])).collect())
}

pub fn series(s: &TaylorSeries, shown: usize) -> Value {
    Value::Array(s.coeffs().iter().take(shown).map(scalar).collect())
}

/// Coefficients in ascending powers of `D`, each a truncated series in `t - t0`.
pub fn operator(op: &DiffOp, shown: usize) -> Value {
    json!({
        "order": op.order().ok(),
        "valid_to": op.valid_to(),
        "base": scalar(op.base()),
        "coeffs": op.coeffs().iter().map(|c| series(c, shown)).collect::<Vec<_>>(),
        "display": op.truncate(op.valid_to().min(shown.saturating_sub(1))).to_string(),
    })
}

pub fn point(p: &DivisorPoint) -> Value {
    json!({
        "lambda": complex(p.lambda),
        "mu": complex(p.mu),
        "multiplicity": p.multiplicity,
        "delta": p.delta,
        "residual": format!("{:.1e}", p.residual),
        "branches": p.branches.iter().map(|b| json!({"ramification": b.ramification, "pole_order": b.pole_order})).collect::<Vec<_>>(),
    })
}

fn is_scalar(v: &Value) -> bool {
    !v.is_object() && !v.is_array()
}

// scalars, or `[re, im]` pairs
fn is_leafy(v: &Value) -> bool {
    match v {
        Value::Array(a) => {
            a.iter().all(is_scalar)
                || a.iter().all(|x| x.as_array().is_some_and(|p| p.len() == 2 && p.iter().all(is_scalar)))
        }
        Value::Object(_) => false,
        _ => true,
    }
}

/// Objects one key per line; arrays of scalars or of complex pairs on a
/// single line.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("string key"));
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() && !is_leafy(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trips() {
        let v = json!({"b": [[0, 2, "1", "0"], [3, 0, "-1", "0"]], "a": {"x": [], "y": null}});
        let s = to_pretty(&v);
        assert!(s.contains("[0,2,\"1\",\"0\"]"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
