//! JSON input formats.
//!
//! Complex numbers are two-element arrays `[re, im]`. Parsing is strict:
//! unknown keys, missing keys and shape mismatches are all rejected.
//!
//! ```text
//! matrix:  {"rows": n, "cols": m, "data": [[[re, im], …], …]}     (row-major)
//! vectors: {"dim": n, "vectors": [[[re, im], …], …]}
//! kernel:  {"points": [x…], "weights": [w…], "values": [[[re, im], …], …]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certify::ComplexMatrix;
use crate::cone::ComplexVector;
use crate::error::{Error, Result};
use crate::kernel::KernelGrid;
use crate::Complex;

type Pair = [f64; 2];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Pair>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorSetFile {
    dim: usize,
    vectors: Vec<Vec<Pair>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    points: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Vec<Pair>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Input(e.to_string())
}

fn to_complex(p: &Pair) -> Complex {
    Complex::new(p[0], p[1])
}

fn to_pair(z: &Complex) -> Pair {
    [z.re, z.im]
}

/// Checks a `rows × cols` nested array and flattens it row-major.
fn flatten(field: &str, nested: &[Vec<Pair>], rows: usize, cols: usize) -> Result<Vec<Complex>> {
    if nested.len() != rows {
        return Err(Error::Input(format!(
            "{field}: {} rows, expected {rows}",
            nested.len()
        )));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in nested.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Input(format!(
                "{field}[{i}]: {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, p) in row.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::Input(format!("{field}[{i}][{j}] is not finite")));
            }
            out.push(to_complex(p));
        }
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_matrix_str(text: &str) -> Result<ComplexMatrix> {
    let f: MatrixFile = serde_json::from_str(text).map_err(json_error)?;
    if f.rows == 0 || f.cols == 0 {
        return Err(Error::Input(format!(
            "rows = {}, cols = {} must be positive",
            f.rows, f.cols
        )));
    }
    let data = flatten("data", &f.data, f.rows, f.cols)?;
    ComplexMatrix::new(f.rows, f.cols, data)
}

pub fn parse_vectors_str(text: &str) -> Result<Vec<ComplexVector>> {
    let f: VectorSetFile = serde_json::from_str(text).map_err(json_error)?;
    if f.dim == 0 {
        return Err(Error::Input("dim must be positive".into()));
    }
    let flat = flatten("vectors", &f.vectors, f.vectors.len(), f.dim)?;
    flat.chunks(f.dim)
        .map(|c| ComplexVector::new(c.to_vec()))
        .collect()
}

pub fn parse_kernel_str(text: &str) -> Result<KernelGrid> {
    let f: KernelFile = serde_json::from_str(text).map_err(json_error)?;
    let n = f.points.len();
    if f.weights.len() != n {
        return Err(Error::Input(format!(
            "weights: {} entries, expected {n}",
            f.weights.len()
        )));
    }
    if let Some(i) = f.weights.iter().position(|&w| w <= 0.0 || w.is_nan()) {
        return Err(Error::Input(format!(
            "weights[{i}] = {} is not positive",
            f.weights[i]
        )));
    }
    let data = flatten("values", &f.values, n, n)?;
    let values = ComplexMatrix::new(n.max(1), n.max(1), data)
        .map_err(|e| Error::Input(format!("values: {e}")))?;
    KernelGrid::new(f.points, f.weights, values).map_err(|e| Error::Input(e.to_string()))
}

pub fn parse_matrix(path: &Path) -> Result<ComplexMatrix> {
    with_path(path, read(path).and_then(|t| parse_matrix_str(&t)))
}

pub fn parse_vectors(path: &Path) -> Result<Vec<ComplexVector>> {
    with_path(path, read(path).and_then(|t| parse_vectors_str(&t)))
}

pub fn parse_kernel(path: &Path) -> Result<KernelGrid> {
    with_path(path, read(path).and_then(|t| parse_kernel_str(&t)))
}

fn nested(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(to_pair).collect())
        .collect()
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

/// Canonical JSON form of a matrix file.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    pretty(&MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        data: nested(m),
    })
}

pub fn vectors_to_json(vs: &[ComplexVector]) -> String {
    pretty(&VectorSetFile {
        dim: vs.first().map_or(0, ComplexVector::len),
        vectors: vs
            .iter()
            .map(|v| v.entries().iter().map(to_pair).collect())
            .collect(),
    })
}

pub fn kernel_to_json(k: &KernelGrid) -> String {
    pretty(&KernelFile {
        points: k.points().to_vec(),
        weights: k.weights().to_vec(),
        values: nested(k.values()),
    })
}
