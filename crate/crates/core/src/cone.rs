//! The canonical complexified cone `C̄ⁿ₊ = { x ∈ ℂⁿ : Re(xᵢ x̄ⱼ) ≥ 0 }`.
//!
//! With the canonical basis as generating set, the comparison quantities
//! `α(x, y)` and `β(x, y)` of the cone pre-order reduce to a finite
//! enumeration: `β(x, y)` is the largest value of `Φ` over the pair matrices
//! `[[x_p, x_q], [y_p, y_q]]`, and `α(x, y)` the smallest value of `φ`. The
//! projective metric is `d(x, y) = log(β(x, y) β(y, x))`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::core2x2::Complex2x2;
use crate::error::{Error, Result};
use crate::{Complex, DEFAULT_TOL};

/// A finite complex vector of length at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension(
                "vector must have at least one entry".into(),
            ));
        }
        if let Some((i, z)) = entries
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite(format!("entry {i} = {z}")));
        }
        Ok(Self(entries))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex>) -> Self {
        Self(entries)
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![Complex::new(1.0, 0.0); n.max(1)])
    }

    /// The `i`-th canonical basis vector of `ℂⁿ`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::Index(format!("basis index {i} for dimension {n}")));
        }
        let mut v = vec![Complex::new(0.0, 0.0); n];
        v[i] = Complex::new(1.0, 0.0);
        Ok(Self(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self(self.0.iter().map(|&z| s * z).collect())
    }

    /// `self − s·other`.
    pub fn sub_scaled(&self, s: Complex, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&x, &y)| x - s * y)
                .collect(),
        )
    }

    /// The bilinear pairing `⟨self, x⟩ = Σ selfᵢ xᵢ` (no conjugation).
    pub fn pair(&self, x: &Self) -> Complex {
        self.0.iter().zip(&x.0).map(|(&m, &v)| m * v).sum()
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.0[i]
    }
}

/// `x = (λ/2)((1+i) u₁ + (1−i) u₂)` with `u₁, u₂` real and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeDecomposition {
    pub lambda: Complex,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
}

impl ConeDecomposition {
    pub fn reconstruct(&self) -> ComplexVector {
        let half = self.lambda * 0.5;
        let (p, m) = (Complex::new(1.0, 1.0), Complex::new(1.0, -1.0));
        ComplexVector(
            self.u1
                .iter()
                .zip(&self.u2)
                .map(|(&u1, &u2)| half * (p * u1 + m * u2))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult {
    pub beta_xy: f64,
    pub beta_yx: f64,
    pub distance: f64,
}

/// `Re(xᵢ x̄ⱼ) ≥ −tol·‖x‖²` for every pair.
pub fn member_closed(x: &ComplexVector, tol: f64) -> bool {
    let eps = tol * x.norm_sqr();
    let e = x.entries();
    (0..e.len()).all(|i| (i + 1..e.len()).all(|j| (e[i] * e[j].conj()).re >= -eps))
}

/// `Re(xᵢ x̄ⱼ) > tol·‖x‖²` for every pair, including `i = j`.
pub fn member_open(x: &ComplexVector, tol: f64) -> bool {
    let eps = tol * x.norm_sqr();
    let e = x.entries();
    (0..e.len()).all(|i| (i..e.len()).all(|j| (e[i] * e[j].conj()).re > eps))
}

/// Arguments of the nonzero points, sorted, with the sector they span:
/// `(start, width)` where the sector is `[start, start + width]`.
fn smallest_sector(zs: &[Complex]) -> Result<(f64, f64)> {
    if zs.is_empty() {
        return Ok((0.0, 0.0));
    }
    let mut args = zs
        .iter()
        .map(|z| {
            if z.norm() == 0.0 {
                Err(Error::Domain("aperture of a zero entry".into()))
            } else {
                Ok(z.arg())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    args.sort_by(f64::total_cmp);
    let n = args.len();
    // gap after args[k], wrapping around
    let (mut best_gap, mut best_k) = (args[0] + TAU - args[n - 1], n - 1);
    for k in 0..n - 1 {
        let gap = args[k + 1] - args[k];
        if gap > best_gap {
            best_gap = gap;
            best_k = k;
        }
    }
    let start = args[(best_k + 1) % n];
    Ok((start, (TAU - best_gap).max(0.0)))
}

/// Width of the smallest closed angular sector containing all points.
pub fn aperture(zs: &[Complex]) -> Result<f64> {
    smallest_sector(zs).map(|(_, w)| w)
}

/// Write a cone member as a complex multiple of a combination of two
/// nonnegative real vectors.
pub fn canonical_decompose(x: &ComplexVector, tol: f64) -> Result<ConeDecomposition> {
    if x.is_zero() {
        return Err(Error::Domain("cannot decompose the zero vector".into()));
    }
    if !member_closed(x, tol) {
        return Err(Error::Domain("vector is not in the closed cone".into()));
    }
    let nonzero: Vec<Complex> = x
        .entries()
        .iter()
        .copied()
        .filter(|z| z.norm() > 0.0)
        .collect();
    let (start, width) = smallest_sector(&nonzero)?;
    debug_assert!(width <= FRAC_PI_2 + 1e-6 || width >= PI);
    let lambda = Complex::from_polar(1.0, start + 0.5 * width);
    let inv = lambda.conj();
    let (u1, u2) = x
        .entries()
        .iter()
        .map(|&z| {
            let w = inv * z;
            ((w.re + w.im).max(0.0), (w.re - w.im).max(0.0))
        })
        .unzip();
    Ok(ConeDecomposition { lambda, u1, u2 })
}

/// `[[x_p, x_q], [y_p, y_q]]`.
pub fn pair_matrix(x: &ComplexVector, y: &ComplexVector, p: usize, q: usize) -> Complex2x2 {
    Complex2x2::from_entries(x[p], x[q], y[p], y[q])
}

fn check_pair(x: &ComplexVector, y: &ComplexVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "lengths {} and {} differ",
            x.len(),
            y.len()
        )));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if v.is_zero() {
            return Err(Error::Domain(format!("{name} is the zero vector")));
        }
        if !member_closed(v, DEFAULT_TOL) {
            return Err(Error::Domain(format!("{name} is not in the closed cone")));
        }
    }
    Ok(())
}

/// A value with the pair `(p, q)` attaining it.
pub(crate) type Extreme = (f64, (usize, usize));

/// Extremes of `φ` and `Φ` over all pair matrices `p ≤ q`, with the indices
/// attaining them. Inputs are assumed validated.
pub(crate) fn pair_extremes(x: &ComplexVector, y: &ComplexVector) -> Result<(Extreme, Extreme)> {
    let n = x.len();
    let mut lo = (f64::INFINITY, (0, 0));
    let mut hi = (0.0, (0, 0));
    for p in 0..n {
        for q in p..n {
            let m = pair_matrix(x, y, p, q);
            let inf = m.inf_modulus()?;
            let sup = m.sup_modulus()?;
            if inf < lo.0 {
                lo = (inf, (p, q));
            }
            if sup > hi.0 {
                hi = (sup, (p, q));
            }
        }
    }
    Ok((lo, hi))
}

/// `β(x, y)`: the smallest `t` with `x ⪯ t y`.
pub fn beta(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    check_pair(x, y)?;
    Ok(pair_extremes(x, y)?.1 .0)
}

/// `α(x, y)`: the largest `t` with `x ⪰ t y`; equals `1/β(y, x)`.
pub fn alpha(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    check_pair(x, y)?;
    Ok(pair_extremes(x, y)?.0 .0)
}

/// Projective distance `log(β(x, y) β(y, x)) ∈ [0, +∞]`.
pub fn distance(x: &ComplexVector, y: &ComplexVector) -> Result<DistanceResult> {
    let beta_xy = beta(x, y)?;
    let beta_yx = beta(y, x)?;
    let distance = if beta_xy.is_infinite() || beta_yx.is_infinite() {
        f64::INFINITY
    } else {
        (beta_xy.ln() + beta_yx.ln()).max(0.0)
    };
    Ok(DistanceResult {
        beta_xy,
        beta_yx,
        distance,
    })
}

/// `x ⪰ y`, decided by `β(y, x) ≤ 1 + tol`.
pub fn preorder_geq(x: &ComplexVector, y: &ComplexVector, tol: f64) -> Result<bool> {
    Ok(beta(y, x)? <= 1.0 + tol)
}

/// Checks `x − α y ∈ C̄ⁿ₊ \ {0}` for `n_alpha` points `α` on the circle
/// `|α| = radius`. A necessary condition for `x ⪰ y`.
pub fn preorder_sample_check(
    x: &ComplexVector,
    y: &ComplexVector,
    n_alpha: usize,
    radius: f64,
) -> Result<bool> {
    check_pair(x, y)?;
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::Domain(format!(
            "sample radius {radius} not in [0, 1)"
        )));
    }
    let n_alpha = n_alpha.max(1);
    Ok((0..n_alpha).all(|k| {
        let a = Complex::from_polar(radius, TAU * k as f64 / n_alpha as f64);
        let v = x.sub_scaled(a, y);
        !v.is_zero() && member_closed(&v, DEFAULT_TOL)
    }))
}

/// Classical Hilbert projective metric on the open positive orthant.
pub fn hilbert_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Dimension(format!(
            "lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::Domain(
            "Hilbert metric needs positive entries".into(),
        ));
    }
    let (lo, hi) = x
        .iter()
        .zip(y)
        .map(|(a, b)| a / b)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        });
    Ok((hi / lo).ln())
}
