//! Integral operators given by a sampled kernel.
//!
//! A kernel `k` sampled on nodes `x₁ < … < x_N` is certified through the
//! 2×2 blocks `[[k(x₁,y₁), k(x₁,y₂)], [k(x₂,y₁), k(x₂,y₂)]]` of its value
//! matrix. Positive quadrature weights act as a positive diagonal scaling and
//! leave `θ` unchanged, so the same certificate covers the Nyström matrix.

use crate::certify::{self, ComplexMatrix, ContractionCertificate};
use crate::error::{Error, Result};
use crate::spectral::{self, EigenTriple};

/// Additive slack when comparing an observed gap against a certified rate.
pub const GAP_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
    values: ComplexMatrix,
}

impl KernelGrid {
    /// `values[i][j] = k(xᵢ, xⱼ)`.
    pub fn new(points: Vec<f64>, weights: Vec<f64>, values: ComplexMatrix) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::Dimension(format!(
                "kernel grid needs at least 2 nodes, got {n}"
            )));
        }
        if weights.len() != n || values.rows() != n || values.cols() != n {
            return Err(Error::Dimension(format!(
                "{n} nodes, {} weights, {}×{} values",
                weights.len(),
                values.rows(),
                values.cols()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(format!("node {i}")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("nodes must be strictly increasing".into()));
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Domain(format!(
                "weight {i} = {} is not positive",
                weights[i]
            )));
        }
        Ok(Self {
            points,
            weights,
            values,
        })
    }

    /// Samples `k` on the nodes.
    pub fn from_fn(
        points: Vec<f64>,
        weights: Vec<f64>,
        k: impl Fn(f64, f64) -> crate::Complex,
    ) -> Result<Self> {
        let data = points
            .iter()
            .flat_map(|&x| points.iter().map(move |&y| (x, y)))
            .map(|(x, y)| k(x, y))
            .collect();
        let n = points.len();
        let values = ComplexMatrix::new(n, n, data)?;
        Self::new(points, weights, values)
    }

    /// `n` uniform nodes on `[lo, hi]` (midpoint rule) with weights `(hi − lo)/n`.
    pub fn uniform(
        n: usize,
        lo: f64,
        hi: f64,
        k: impl Fn(f64, f64) -> crate::Complex,
    ) -> Result<Self> {
        let h = (hi - lo) / n as f64;
        let points = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
        Self::from_fn(points, vec![h; n], k)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &ComplexMatrix {
        &self.values
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.points.clone(), weights, self.values.clone())
    }
}

/// Exhaustive certificate over all node quadruples `i₁ < i₂`, `j₁ < j₂`.
pub fn kernel_theta(k: &KernelGrid, tol: f64) -> Result<ContractionCertificate> {
    certify::certify_matrix(&k.values, tol)
}

/// Sampled quadruples only; the result is marked non-exhaustive.
pub fn kernel_theta_sampled(
    k: &KernelGrid,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<ContractionCertificate> {
    certify::certify_matrix_sampled(&k.values, tol, samples, seed)
}

/// Nyström matrix `L[j][i] = k(xᵢ, xⱼ)·wᵢ` acting on samples `φ(xᵢ)`.
pub fn nystrom_matrix(k: &KernelGrid) -> ComplexMatrix {
    k.values
        .transpose()
        .scale_diag(&vec![1.0; k.len()], &k.weights)
        .expect("grid dimensions are validated")
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelCertification {
    pub certificate: ContractionCertificate,
    pub triple: EigenTriple,
    /// `r_sp(L − λP) / |λ|` for the Nyström matrix.
    pub observed_gap: f64,
    /// `observed_gap ≤ η_refined` (up to [`GAP_SLACK`]).
    pub gap_bound_holds: bool,
}

/// Certificate, leading eigen-triple and observed gap of the Nyström operator.
pub fn kernel_certify(
    k: &KernelGrid,
    tol: f64,
    eig_tol: f64,
    max_iter: usize,
    deflation_iters: usize,
    seed: u64,
) -> Result<KernelCertification> {
    let certificate = kernel_theta(k, tol)?;
    let eta = certificate.rate()?;
    let l = nystrom_matrix(k);
    let triple = spectral::power_eigen(&l, &certificate, eig_tol, max_iter)?;
    if !triple.converged {
        return Err(Error::NoConvergence(format!(
            "power iteration did not converge in {max_iter} steps"
        )));
    }
    let observed_gap = spectral::observed_gap(&l, &triple, deflation_iters, seed)?;
    Ok(KernelCertification {
        gap_bound_holds: observed_gap <= eta + GAP_SLACK,
        certificate,
        triple,
        observed_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::CertificateClass;
    use crate::{Complex, DEFAULT_TOL};

    fn gaussian(x: f64, y: f64) -> Complex {
        Complex::new((-(x - y) * (x - y)).exp(), 0.0)
    }

    #[test]
    fn constant_kernel() {
        let k = KernelGrid::uniform(5, 0.0, 1.0, |_, _| Complex::new(1.0, 0.0)).unwrap();
        let c = kernel_theta(&k, DEFAULT_TOL).unwrap();
        assert_eq!(c.class, CertificateClass::Strict);
        assert_eq!(c.theta, Some(0.0));
        let l = nystrom_matrix(&k);
        assert!(l
            .data()
            .iter()
            .all(|z| (z - Complex::new(0.2, 0.0)).norm() < 1e-15));
        let kc = kernel_certify(&k, DEFAULT_TOL, 1e-12, 1000, 100, 0).unwrap();
        assert!((kc.triple.lambda - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(kc.observed_gap, 0.0);
        assert!(kc.gap_bound_holds);
    }

    #[test]
    fn gaussian_kernel_is_strict() {
        let k = KernelGrid::uniform(5, 0.0, 1.0, gaussian).unwrap();
        let c = kernel_theta(&k, DEFAULT_TOL).unwrap();
        assert_eq!(c.class, CertificateClass::Strict);
        assert!(c.theta.unwrap() < 1.0);
    }

    #[test]
    fn negative_kernel_fails_with_witness() {
        let k = KernelGrid::uniform(4, 0.0, 1.0, |x, y| {
            Complex::new(if x > 0.5 && y < 0.5 { -1.0 } else { 1.0 }, 0.0)
        })
        .unwrap();
        let c = kernel_theta(&k, DEFAULT_TOL).unwrap();
        assert_eq!(c.class, CertificateClass::Fail);
        assert!(c.witness.is_some());
        assert!(matches!(
            kernel_certify(&k, DEFAULT_TOL, 1e-12, 100, 10, 0),
            Err(Error::NotStrict(_))
        ));
    }

    #[test]
    fn identity_quadrature() {
        let values = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let k = KernelGrid::new(vec![0.0, 1.0], vec![1.0, 1.0], values.clone()).unwrap();
        assert_eq!(nystrom_matrix(&k), values);
    }

    #[test]
    fn nystrom_orientation() {
        let values = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let k = KernelGrid::new(vec![0.0, 1.0], vec![0.5, 2.0], values).unwrap();
        let l = nystrom_matrix(&k);
        // L[j][i] = k(x_i, x_j) w_i
        assert_eq!(l.get(1, 0), Complex::new(2.0 * 0.5, 0.0));
        assert_eq!(l.get(0, 1), Complex::new(3.0 * 2.0, 0.0));
    }

    #[test]
    fn grid_validation() {
        let v = ComplexMatrix::identity(2);
        assert!(KernelGrid::new(vec![0.0, 1.0], vec![1.0, 0.0], v.clone()).is_err());
        assert!(KernelGrid::new(vec![1.0, 0.0], vec![1.0, 1.0], v.clone()).is_err());
        assert!(KernelGrid::new(vec![0.0], vec![1.0], ComplexMatrix::identity(1)).is_err());
        assert!(KernelGrid::new(vec![0.0, 1.0, 2.0], vec![1.0; 3], v).is_err());
    }
}
