//! Random generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_4;

use cone_gap::certify::{self, ComplexMatrix, ContractionCertificate};
use cone_gap::{Complex, ComplexVector, DEFAULT_TOL};
use rand::Rng;

/// Positive real entries in `[0.5, 1.5]` plus imaginary parts in `[−imag, imag]`.
pub fn perturbed_positive(rng: &mut impl Rng, n: usize, imag: f64) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| Complex::new(rng.random_range(0.5..1.5), rng.random_range(-imag..=imag)))
        .collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Draws until `certify_matrix` returns a strict certificate.
pub fn strict_matrix(
    rng: &mut impl Rng,
    n: usize,
    imag: f64,
) -> (ComplexMatrix, ContractionCertificate) {
    loop {
        let a = perturbed_positive(rng, n, imag);
        let c = certify::certify_matrix(&a, DEFAULT_TOL).unwrap();
        if c.is_strict() {
            return (a, c);
        }
    }
}

/// Entries `rₖ e^{i(φ + tₖ)}` with `|tₖ| ≤ spread < π/4`, so every pair has
/// `Re(xₖ x̄ₗ) > 0`.
pub fn cone_vector(rng: &mut impl Rng, n: usize, spread: f64) -> ComplexVector {
    assert!(spread < FRAC_PI_4);
    let phase = rng.random_range(-3.0..3.0);
    let v = (0..n)
        .map(|_| {
            let r: f64 = rng.random_range(0.05..2.0);
            Complex::from_polar(r, phase + rng.random_range(-spread..=spread))
        })
        .collect();
    ComplexVector::new(v).unwrap()
}

pub fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex {
    Complex::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}
