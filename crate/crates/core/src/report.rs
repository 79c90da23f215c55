//! Deterministic JSON reports.
//!
//! Objects are key-sorted and every float is printed with 17 significant
//! digits, so identical runs give byte-identical output. Non-finite floats
//! are written as the strings `"inf"`, `"-inf"` and `"nan"`.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::certify::{BlockWitness, ContractionCertificate};
use crate::cone::{ComplexVector, DistanceResult};
use crate::core2x2::{Complex2x2, DeltaQuadruple};
use crate::spectral::EigenTriple;
use crate::variational::VariationalBounds;
use crate::Complex;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Value>),
    Obj(BTreeMap<String, Value>),
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<i32> for Value {
    fn from(x: i32) -> Self {
        Value::Int(x as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<Complex> for Value {
    fn from(z: Complex) -> Self {
        Value::Arr(vec![Value::Num(z.re), Value::Num(z.im)])
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Self {
        Value::Arr(v.into_iter().map(Into::into).collect())
    }
}

/// Builder for key-sorted objects.
#[derive(Debug, Default, Clone)]
pub struct Obj(BTreeMap<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), v.into());
        self
    }

    pub fn insert(&mut self, key: &str, v: impl Into<Value>) {
        self.0.insert(key.to_owned(), v.into());
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Self {
        Value::Obj(o.0)
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "\"nan\"".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "\"inf\"".into()
        } else {
            "\"-inf\"".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

impl Value {
    /// Two-space indented rendering, terminated by a newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
        match self {
            Value::Null => out.push_str("null"),
            Value::Bool(b) => write!(out, "{b}").unwrap(),
            Value::Int(i) => write!(out, "{i}").unwrap(),
            Value::Num(x) => out.push_str(&format_float(*x)),
            Value::Str(s) => out.push_str(&serde_json::to_string(s).expect("string escapes")),
            Value::Arr(items) if items.is_empty() => out.push_str("[]"),
            Value::Arr(items) if items.iter().all(Value::is_scalar) => {
                out.push('[');
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    v.write(out, depth);
                }
                out.push(']');
            }
            Value::Arr(items) => {
                out.push_str("[\n");
                for (k, v) in items.iter().enumerate() {
                    pad(out, depth + 1);
                    v.write(out, depth + 1);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push(']');
            }
            Value::Obj(map) if map.is_empty() => out.push_str("{}"),
            Value::Obj(map) => {
                out.push_str("{\n");
                for (k, (key, v)) in map.iter().enumerate() {
                    pad(out, depth + 1);
                    out.push_str(&serde_json::to_string(key).expect("string escapes"));
                    out.push_str(": ");
                    v.write(out, depth + 1);
                    out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
                }
                pad(out, depth);
                out.push('}');
            }
        }
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Value::Obj(_))
            && !matches!(self, Value::Arr(v) if !v.iter().all(Value::is_scalar))
    }
}

pub fn vector(v: &ComplexVector) -> Value {
    Value::Arr(v.entries().iter().map(|&z| z.into()).collect())
}

pub fn block(m: &Complex2x2) -> Value {
    Value::Arr(vec![
        Value::Arr(vec![m.a.into(), m.b.into()]),
        Value::Arr(vec![m.c.into(), m.d.into()]),
    ])
}

pub fn deltas(d: &DeltaQuadruple) -> Value {
    Obj::new()
        .set("d1", d.d1)
        .set("d2", d.d2)
        .set("d3", d.d3)
        .set("d4", d.d4)
        .into()
}

fn witness(w: &BlockWitness) -> Value {
    Obj::new()
        .set("rows", vec![w.i, w.j])
        .set("cols", vec![w.p, w.q])
        .set("block", block(&w.block))
        .into()
}

pub fn certificate(c: &ContractionCertificate) -> Value {
    Obj::new()
        .set("class", c.class.as_str())
        .set("theta", c.theta)
        .set("delta_sup", deltas(&c.delta_sup))
        .set("eta_simple", c.eta_simple)
        .set("eta_refined", c.eta_refined)
        .set("diam_bound", c.diam_bound)
        .set("witness", c.witness.as_ref().map_or(Value::Null, witness))
        .set("exhaustive", c.exhaustive)
        .set("certifying", c.exhaustive)
        .set("blocks_checked", c.blocks_checked)
        .into()
}

pub fn eigen(t: &EigenTriple) -> Value {
    Obj::new()
        .set("lambda", t.lambda)
        .set("lambda_modulus", t.lambda.norm())
        .set("h", vector(&t.h))
        .set("nu", vector(&t.nu))
        .set("iterations", t.iterations)
        .set("dual_iterations", t.dual_iterations)
        .set("residual", t.residual)
        .set("dual_residual", t.dual_residual)
        .set("metric_error", t.metric_error)
        .set("converged", t.converged)
        .into()
}

pub fn bounds(b: &VariationalBounds) -> Value {
    Obj::new()
        .set("lower", b.lower)
        .set("upper", b.upper)
        .set("argmin", vec![b.argmin.0, b.argmin.1])
        .set("argmax", vec![b.argmax.0, b.argmax.1])
        .set("test_vector", vector(&b.test_vector))
        .into()
}

pub fn distance(d: &DistanceResult) -> Value {
    Obj::new()
        .set("beta_xy", d.beta_xy)
        .set("beta_yx", d.beta_yx)
        .set("distance", d.distance)
        .into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_float(0.6), "5.9999999999999998e-1");
        assert_eq!(format_float(3.0), "3.0000000000000000e0");
        assert_eq!(format_float(f64::INFINITY), "\"inf\"");
    }

    #[test]
    fn keys_are_sorted_and_output_parses() {
        let v: Value = Obj::new()
            .set("zeta", 1.5)
            .set("alpha", vec![1usize, 2])
            .set("mid", Obj::new().set("b", Value::Null).set("a", "x\"y"))
            .into();
        let s = v.render();
        assert!(s.find("alpha").unwrap() < s.find("mid").unwrap());
        assert!(s.find("mid").unwrap() < s.find("zeta").unwrap());
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["mid"]["a"], "x\"y");
        assert_eq!(back["zeta"].as_f64(), Some(1.5));
    }
}
