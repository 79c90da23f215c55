//! Contraction certificates for complex matrices.
//!
//! For `A ∈ M_{n,m}(ℂ)` the family of 2×2 blocks is
//! `T = [[a_ip, a_jp], [a_iq, a_jq]]` over row pairs `i < j` and column pairs
//! `p < q`. `A` maps the closed complexified cone into itself (and its
//! transpose maps the dual cone likewise) iff every block is in the closed
//! class; if every block is in the open class with `|det T| / Re(..) ≤ θ < 1`
//! then `A` is a strict contraction of the projective metric with rate
//! `η₁(θ) = tanh(9/4 · log((1+θ)/(1−θ)))`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::{self, ComplexVector};
use crate::core2x2::{self, Complex2x2, DeltaQuadruple};
use crate::error::{Error, Result};
use crate::Complex;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}×{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite(format!(
                "entry ({}, {})",
                k / cols,
                k % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Complex::new(v, 0.0)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex::new(1.0, 0.0);
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &ComplexVector) -> Result<ComplexVector> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}×{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok(ComplexVector::from_vec_unchecked(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x.entries())
                        .map(|(a, v)| a * v)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![Complex::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `diag(left) · A · diag(right)`.
    pub fn scale_diag(&self, left: &[f64], right: &[f64]) -> Result<Self> {
        if left.len() != self.rows || right.len() != self.cols {
            return Err(Error::Dimension("diagonal scaling length mismatch".into()));
        }
        let data = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j) * left[i] * right[j])
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    /// `A − s · u vᵀ`.
    pub fn sub_rank_one(&self, s: Complex, u: &ComplexVector, v: &ComplexVector) -> Result<Self> {
        if u.len() != self.rows || v.len() != self.cols {
            return Err(Error::Dimension("rank-one update length mismatch".into()));
        }
        let data = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j) - s * u[i] * v[j])
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

/// The block `[[a_ip, a_jp], [a_iq, a_jq]]` pairing functionals `e′ᵢ, e′ⱼ`
/// with images `A e_p, A e_q`. Indices are zero-based with `i < j`, `p < q`.
pub fn submatrix_t(
    a: &ComplexMatrix,
    i: usize,
    j: usize,
    p: usize,
    q: usize,
) -> Result<Complex2x2> {
    if a.rows < 2 || a.cols < 2 {
        return Err(Error::Dimension(format!(
            "{}×{} matrix has no 2×2 blocks",
            a.rows, a.cols
        )));
    }
    if !(i < j && j < a.rows && p < q && q < a.cols) {
        return Err(Error::Index(format!(
            "block ({i}, {j}; {p}, {q}) in a {}×{} matrix",
            a.rows, a.cols
        )));
    }
    Ok(Complex2x2::from_entries(
        a.get(i, p),
        a.get(j, p),
        a.get(i, q),
        a.get(j, q),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertificateClass {
    Fail,
    Closed,
    Strict,
}

impl CertificateClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Strict => "strict",
            Self::Closed => "closed",
            Self::Fail => "fail",
        }
    }
}

impl fmt::Display for CertificateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A block singled out by the certificate: the first failing block, or the
/// block attaining `θ` when all blocks are strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockWitness {
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub q: usize,
    pub block: Complex2x2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCertificate {
    pub class: CertificateClass,
    /// `sup |det T| / Re(..)`; absent when some block has a nonpositive denominator.
    pub theta: Option<f64>,
    /// Componentwise sup of Δ₁–Δ₄ over the transposed blocks.
    pub delta_sup: DeltaQuadruple,
    /// `η₁(θ)`; present only for strict certificates.
    pub eta_simple: Option<f64>,
    /// `tanh(Δ₁ + Δ₂/2 + Δ₃/2 + Δ₄/4)`; present only for strict certificates.
    pub eta_refined: Option<f64>,
    pub diam_bound: f64,
    pub witness: Option<BlockWitness>,
    /// `false` for sampled (non-certifying) runs.
    pub exhaustive: bool,
    pub blocks_checked: usize,
}

impl ContractionCertificate {
    pub fn is_strict(&self) -> bool {
        self.class == CertificateClass::Strict
    }

    /// The refined rate of a strict certificate.
    pub fn rate(&self) -> Result<f64> {
        match (self.class, self.eta_refined) {
            (CertificateClass::Strict, Some(eta)) => Ok(eta),
            _ => Err(Error::NotStrict(self.class.to_string())),
        }
    }
}

type BlockIndex = (usize, usize, usize, usize);

/// Partial reduction state over a set of blocks. Combining is associative
/// and order-independent, so parallel and sequential runs agree.
#[derive(Debug, Clone)]
struct Accumulator {
    count: usize,
    first_not_open: Option<BlockIndex>,
    first_not_closed: Option<BlockIndex>,
    theta_defined: bool,
    theta: f64,
    argmax: Option<BlockIndex>,
    deltas: DeltaQuadruple,
}

impl Accumulator {
    fn empty() -> Self {
        Self {
            count: 0,
            first_not_open: None,
            first_not_closed: None,
            theta_defined: true,
            theta: 0.0,
            argmax: None,
            deltas: DeltaQuadruple::ZERO,
        }
    }

    fn push(&mut self, idx: BlockIndex, t: &Complex2x2, tol: f64) {
        self.count += 1;
        if !t.in_gamma_open(tol) && self.first_not_open.is_none() {
            self.first_not_open = Some(idx);
        }
        if !t.in_gamma_closed(tol) && self.first_not_closed.is_none() {
            self.first_not_closed = Some(idx);
        }
        match t.theta2() {
            Some(th) => {
                if self.argmax.is_none() || th > self.theta {
                    self.theta = th;
                    self.argmax = Some(idx);
                }
            }
            None => self.theta_defined = false,
        }
        self.deltas = self.deltas.max(t.transpose().deltas());
    }

    fn merge(self, other: Self) -> Self {
        let min_idx = |a: Option<BlockIndex>, b: Option<BlockIndex>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let (theta, argmax) = match (self.argmax, other.argmax) {
            (None, _) => (other.theta, other.argmax),
            (_, None) => (self.theta, self.argmax),
            (Some(a), Some(b)) => {
                if self.theta > other.theta || (self.theta == other.theta && a <= b) {
                    (self.theta, Some(a))
                } else {
                    (other.theta, Some(b))
                }
            }
        };
        Self {
            count: self.count + other.count,
            first_not_open: min_idx(self.first_not_open, other.first_not_open),
            first_not_closed: min_idx(self.first_not_closed, other.first_not_closed),
            theta_defined: self.theta_defined && other.theta_defined,
            theta,
            argmax,
            deltas: self.deltas.max(other.deltas),
        }
    }

    fn finish(self, a: &ComplexMatrix, exhaustive: bool) -> ContractionCertificate {
        let class = if self.first_not_closed.is_some() {
            CertificateClass::Fail
        } else if self.first_not_open.is_some() {
            CertificateClass::Closed
        } else {
            CertificateClass::Strict
        };
        let witness_idx = self
            .first_not_closed
            .or(self.first_not_open)
            .or(self.argmax);
        let witness = witness_idx.map(|(i, j, p, q)| BlockWitness {
            i,
            j,
            p,
            q,
            block: Complex2x2::from_entries(a.get(i, p), a.get(j, p), a.get(i, q), a.get(j, q)),
        });
        let theta = self.theta_defined.then_some(self.theta);
        let strict = class == CertificateClass::Strict;
        ContractionCertificate {
            class,
            theta,
            delta_sup: self.deltas,
            eta_simple: if strict {
                theta.map(core2x2::eta1)
            } else {
                None
            },
            eta_refined: strict.then(|| self.deltas.weighted_sum().tanh()),
            diam_bound: self.deltas.diameter_bound(),
            witness,
            exhaustive,
            blocks_checked: self.count,
        }
    }
}

fn check_dims(a: &ComplexMatrix) -> Result<()> {
    if a.rows < 2 || a.cols < 2 {
        return Err(Error::Dimension(format!(
            "certification needs at least 2×2, got {}×{}",
            a.rows, a.cols
        )));
    }
    Ok(())
}

/// Exhaustive certificate over all `O(n² m²)` blocks. Row pairs are reduced
/// in parallel on the current rayon pool.
pub fn certify_matrix(a: &ComplexMatrix, tol: f64) -> Result<ContractionCertificate> {
    check_dims(a)?;
    let (n, m) = (a.rows, a.cols);
    let row_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let acc = row_pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = Accumulator::empty();
            for p in 0..m {
                for q in p + 1..m {
                    let t = Complex2x2::from_entries(
                        a.get(i, p),
                        a.get(j, p),
                        a.get(i, q),
                        a.get(j, q),
                    );
                    acc.push((i, j, p, q), &t, tol);
                }
            }
            acc
        })
        .reduce(Accumulator::empty, Accumulator::merge);
    Ok(acc.finish(a, true))
}

/// Triage mode: tests `samples` uniformly random blocks. The result is
/// marked non-exhaustive and does not certify anything.
pub fn certify_matrix_sampled(
    a: &ComplexMatrix,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<ContractionCertificate> {
    check_dims(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick_pair = |len: usize| {
        let x = rng.random_range(0..len);
        let mut y = rng.random_range(0..len - 1);
        if y >= x {
            y += 1;
        }
        (x.min(y), x.max(y))
    };
    let mut acc = Accumulator::empty();
    for _ in 0..samples {
        let (i, j) = pick_pair(a.rows);
        let (p, q) = pick_pair(a.cols);
        let t = Complex2x2::from_entries(a.get(i, p), a.get(j, p), a.get(i, q), a.get(j, q));
        acc.push((i, j, p, q), &t, tol);
    }
    Ok(acc.finish(a, false))
}

/// Spectral-gap bound for a product `A₁ ⋯ Aₖ`: the product of the refined
/// per-factor rates.
pub fn product_gap_bound(certs: &[ContractionCertificate]) -> Result<f64> {
    if certs.is_empty() {
        return Err(Error::Dimension("no certificates".into()));
    }
    certs.iter().try_fold(1.0, |acc, c| Ok(acc * c.rate()?))
}

/// Observed contraction of one pair of cone vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCheck {
    pub source_distance: f64,
    pub image_distance: f64,
    pub rate: f64,
    pub holds: bool,
}

/// Computes `d(Ax, Ay)` and checks it against `rate · d(x, y) + tol`.
pub fn contraction_witness_test(
    a: &ComplexMatrix,
    x: &ComplexVector,
    y: &ComplexVector,
    cert: &ContractionCertificate,
    tol: f64,
) -> Result<LipschitzCheck> {
    let rate = cert.rate()?;
    let source_distance = cone::distance(x, y)?.distance;
    let (ax, ay) = (a.mul_vec(x)?, a.mul_vec(y)?);
    for v in [&ax, &ay] {
        if v.is_zero() || !cone::member_closed(v, crate::DEFAULT_TOL) {
            return Err(Error::Domain("image vector left the cone".into()));
        }
    }
    let image_distance = cone::distance(&ax, &ay)?.distance;
    let holds = if source_distance.is_infinite() {
        true
    } else {
        image_distance <= rate * source_distance + tol
    };
    Ok(LipschitzCheck {
        source_distance,
        image_distance,
        rate,
        holds,
    })
}
