//! Leading eigen-triple by certified power iteration.
//!
//! Under a strict certificate the normalized orbit `x ← Ax / (Ax)₁` is an
//! `η`-contraction of the projective metric, so the distance from the current
//! iterate to the fixed point `h` is at most `d(xₙ, xₙ₊₁) / (1 − η)`. That
//! a-posteriori bound is the stopping criterion and the reported error.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{ComplexMatrix, ContractionCertificate};
use crate::cone::{self, ComplexVector};
use crate::error::{Error, Result};
use crate::Complex;

/// Distances below this multiple of `n·ε` are indistinguishable from rounding.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Largest dimension accepted by [`dense_spectrum_oracle`].
pub const ORACLE_MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenTriple {
    pub lambda: Complex,
    /// Right eigenvector, normalized so that `h₁ = 1`.
    pub h: ComplexVector,
    /// Left eigenvector for the bilinear pairing, normalized so that `⟨ν, h⟩ = 1`.
    pub nu: ComplexVector,
    pub iterations: usize,
    pub dual_iterations: usize,
    /// `‖Ah − λh‖ / ‖h‖`.
    pub residual: f64,
    /// `‖Aᵗν − λν‖ / ‖ν‖`.
    pub dual_residual: f64,
    /// A-posteriori bound on the projective distance from `h` to the true eigenvector.
    pub metric_error: f64,
    /// `false` when `max_iter` was exhausted; the fields then hold the last iterate.
    pub converged: bool,
}

fn normalized_step(a: &ComplexMatrix, x: &ComplexVector) -> Result<ComplexVector> {
    let y = a.mul_vec(x)?;
    let s = y[0];
    if s.norm() == 0.0 {
        return Err(Error::Domain(
            "first coordinate of the image vanished".into(),
        ));
    }
    Ok(y.scale(s.inv()))
}

struct Orbit {
    x: ComplexVector,
    iterations: usize,
    last_step: f64,
    converged: bool,
}

fn run_orbit(a: &ComplexMatrix, threshold: f64, max_iter: usize) -> Result<Orbit> {
    let mut x = ComplexVector::ones(a.cols());
    let mut last_step = f64::INFINITY;
    for k in 1..=max_iter.max(1) {
        let next = normalized_step(a, &x)?;
        last_step = cone::distance(&x, &next)?.distance;
        x = next;
        if last_step <= threshold {
            return Ok(Orbit {
                x,
                iterations: k,
                last_step,
                converged: true,
            });
        }
    }
    Ok(Orbit {
        x,
        iterations: max_iter.max(1),
        last_step,
        converged: false,
    })
}

fn residual(a: &ComplexMatrix, lambda: Complex, v: &ComplexVector) -> Result<f64> {
    let av = a.mul_vec(v)?;
    Ok(av.sub_scaled(lambda, v).norm() / v.norm())
}

/// Power iteration from `x₀ = (1, …, 1)`, stopping once
/// `d(xₙ, xₙ₊₁) ≤ tol·(1 − η)` (or the rounding floor, whichever is larger).
/// The dual vector comes from the same iteration on `Aᵗ`.
pub fn power_eigen(
    a: &ComplexMatrix,
    cert: &ContractionCertificate,
    tol: f64,
    max_iter: usize,
) -> Result<EigenTriple> {
    let eta = cert.rate()?;
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!(
            "tolerance {tol} must be finite and nonnegative"
        )));
    }
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{}×{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let threshold = (tol * (1.0 - eta)).max(ROUNDING_FLOOR * n as f64);

    let primal = run_orbit(a, threshold, max_iter)?;
    let at = a.transpose();
    let dual = run_orbit(&at, threshold, max_iter)?;

    let h = primal.x;
    let lambda = a.mul_vec(&h)?[0];
    let pairing = dual.x.pair(&h);
    if pairing.norm() == 0.0 {
        return Err(Error::Domain("dual vector annihilates h".into()));
    }
    let nu = dual.x.scale(pairing.inv());

    Ok(EigenTriple {
        residual: residual(a, lambda, &h)?,
        dual_residual: residual(&at, lambda, &nu)?,
        metric_error: primal.last_step / (1.0 - eta),
        iterations: primal.iterations,
        dual_iterations: dual.iterations,
        converged: primal.converged && dual.converged,
        lambda,
        h,
        nu,
    })
}

/// Spectral radius of `B = A − λ h νᵀ` estimated by power iteration from
/// several seeded random complex starts; the maximum over starts is returned.
pub fn deflated_radius(
    a: &ComplexMatrix,
    triple: &EigenTriple,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    const STARTS: u64 = 4;
    if iters < 1 {
        return Err(Error::Domain(
            "deflation needs at least one iteration".into(),
        ));
    }
    let b = a.sub_rank_one(triple.lambda, &triple.h, &triple.nu)?;
    let n = a.rows();
    let zero_floor = 8.0 * n as f64 * f64::EPSILON * a.norm_fro();
    let estimates = (0..STARTS)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
            let start = (0..n)
                .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let mut v = ComplexVector::from_vec_unchecked(start);
            v = v.scale(Complex::new(1.0 / v.norm(), 0.0));
            let mut logs = Vec::with_capacity(iters);
            for _ in 0..iters {
                let w = b.mul_vec(&v)?;
                let g = w.norm();
                if g <= zero_floor {
                    return Ok(0.0);
                }
                logs.push(g.ln());
                v = w.scale(Complex::new(1.0 / g, 0.0));
            }
            let tail = &logs[logs.len() / 2..];
            Ok((tail.iter().sum::<f64>() / tail.len() as f64).exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(estimates.into_iter().fold(0.0, f64::max))
}

/// Observed gap `r_sp(A − λP) / |λ|`.
pub fn observed_gap(
    a: &ComplexMatrix,
    triple: &EigenTriple,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    Ok(deflated_radius(a, triple, iters, seed)? / triple.lambda.norm())
}

/// Full spectrum through a complex Schur decomposition, sorted by decreasing
/// modulus. Used only as an independent check.
pub fn dense_spectrum_oracle(a: &ComplexMatrix) -> Result<Vec<Complex>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{}×{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > ORACLE_MAX_DIM {
        return Err(Error::Dimension(format!(
            "oracle limited to n ≤ {ORACLE_MAX_DIM}, got {n}"
        )));
    }
    let m = DMatrix::from_row_slice(n, n, a.data());
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::NoConvergence("Schur iteration".into()))?;
    let mut eig: Vec<Complex> = schur
        .eigenvalues()
        .ok_or_else(|| Error::NoConvergence("Schur form is not triangular".into()))?
        .iter()
        .copied()
        .collect();
    eig.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.re.total_cmp(&x.re)));
    Ok(eig)
}

/// `|λ₂| / |λ₁|` of a spectrum sorted by decreasing modulus.
pub fn modulus_ratio(spectrum: &[Complex]) -> f64 {
    match spectrum {
        [first, second, ..] if first.norm() > 0.0 => second.norm() / first.norm(),
        _ => 0.0,
    }
}
