//! JSON encodings shared by reports: exact rationals as `"num/den"`
//! strings, reals as decimal strings with an explicit error bound.

use serde_json::{json, Value};

use crate::arith::Q;
use crate::heights::{GElement, HeightValue};
use crate::numberfield::FieldElement;

pub fn q_json(x: &Q) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

/// Shortest round-trip decimal for an f64.
pub fn real_str(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{:?}", x)
}

pub fn real_json(value: f64, abs_error: f64) -> Value {
    json!({ "value": real_str(value), "abs_error": real_str(abs_error) })
}

pub fn height_json(h: &HeightValue) -> Value {
    real_json(h.value, h.abs_error)
}

pub fn element_json(a: &FieldElement) -> Value {
    Value::Array(a.coords().iter().map(q_json).collect())
}

pub fn gelement_json(u: &GElement) -> Value {
    json!({ "scale": q_json(u.scale()), "base": element_json(u.base()), "base_expr": u.base().to_string() })
}
