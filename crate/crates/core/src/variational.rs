//! Complex Collatz–Wielandt bounds on the leading eigenvalue.
//!
//! For a test vector `x` in the cone, the pair matrices
//! `M_pq = [[(Ax)_p, (Ax)_q], [x_p, x_q]]` give
//! `min φ(M_pq) = α(Ax, x) ≤ |λ₁| ≤ β(Ax, x) = max Φ(M_pq)`.
//! The lower bound needs only a closed certificate; the upper bound needs a
//! strict one. Both become equalities at the leading eigenvector.

use crate::certify::{ComplexMatrix, ContractionCertificate};
use crate::cone::{self, ComplexVector};
use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalBounds {
    pub lower: f64,
    pub upper: f64,
    /// Pair `(p, q)` attaining the lower bound.
    pub argmin: (usize, usize),
    /// Pair `(p, q)` attaining the upper bound.
    pub argmax: (usize, usize),
    pub test_vector: ComplexVector,
}

impl VariationalBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Lower and upper bounds on `|λ₁|` at the test vector `x`.
pub fn bounds_at(a: &ComplexMatrix, x: &ComplexVector) -> Result<VariationalBounds> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{}×{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    if x.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "test vector of length {} for a {}×{} matrix",
            x.len(),
            a.rows(),
            a.cols()
        )));
    }
    if x.is_zero() || !cone::member_closed(x, DEFAULT_TOL) {
        return Err(Error::Domain(
            "test vector must be a nonzero cone member".into(),
        ));
    }
    let ax = a.mul_vec(x)?;
    let ((lower, argmin), (upper, argmax)) = cone::pair_extremes(&ax, x)?;
    Ok(VariationalBounds {
        lower,
        upper,
        argmin,
        argmax,
        test_vector: x.clone(),
    })
}

/// `maxᵢ minⱼ Re(a_ji ā_ii) / |a_ji|`, skipping `a_ji = 0`: the lower bound
/// obtained from the canonical basis vectors.
pub fn basis_lower_bound(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{}×{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    Ok((0..n)
        .map(|i| {
            let aii = a.get(i, i);
            (0..n)
                .filter_map(|j| {
                    let aji = a.get(j, i);
                    (aji.norm() > 0.0).then(|| (aji * aii.conj()).re / aji.norm())
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Lower bound at `x = (1, …, 1)`, computed through `φ` of the row-sum pairs.
pub fn ones_lower_bound(a: &ComplexMatrix) -> Result<f64> {
    Ok(bounds_at(a, &ComplexVector::ones(a.cols()))?.lower)
}

/// Bounds along the normalized power orbit `x₀ = 1`, `xₖ₊₁ = Axₖ / (Axₖ)₁`;
/// returns `iters` entries, `k = 0, …, iters − 1`.
pub fn refine_bounds(
    a: &ComplexMatrix,
    cert: &ContractionCertificate,
    iters: usize,
) -> Result<Vec<VariationalBounds>> {
    cert.rate()?;
    let mut x = ComplexVector::ones(a.cols());
    let mut out = Vec::with_capacity(iters);
    for k in 0..iters {
        out.push(bounds_at(a, &x)?);
        if k + 1 == iters {
            break;
        }
        let y = a.mul_vec(&x)?;
        let s = y[0];
        if s.norm() == 0.0 {
            return Err(Error::Domain(
                "first coordinate of the image vanished".into(),
            ));
        }
        x = y.scale(s.inv());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::certify_matrix;
    use crate::Complex;

    fn sym() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()
    }

    #[test]
    fn eigenvector_gives_exact_bounds() {
        let b = bounds_at(&sym(), &ComplexVector::ones(2)).unwrap();
        assert_eq!((b.lower, b.upper), (3.0, 3.0));
    }

    #[test]
    fn basis_vector_bounds() {
        let b = bounds_at(&sym(), &ComplexVector::basis(2, 0).unwrap()).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-15);
        assert_eq!(b.upper, f64::INFINITY);
    }

    #[test]
    fn zero_matrix_lower_bound() {
        let z = ComplexMatrix::new(2, 2, vec![Complex::new(0.0, 0.0); 4]).unwrap();
        let b = bounds_at(&z, &ComplexVector::from_real(&[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(b.lower, 0.0);
    }

    #[test]
    fn bounds_at_errors() {
        let x = ComplexVector::from_real(&[1.0, -1.0]).unwrap();
        assert!(matches!(bounds_at(&sym(), &x), Err(Error::Domain(_))));
        let x = ComplexVector::ones(3);
        assert!(matches!(bounds_at(&sym(), &x), Err(Error::Dimension(_))));
    }

    #[test]
    fn closed_form_lower_bounds() {
        assert_eq!(basis_lower_bound(&sym()).unwrap(), 2.0);
        assert_eq!(ones_lower_bound(&sym()).unwrap(), 3.0);
        let d =
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 4.0, 0.0], &[0.0, 0.0, 2.5]])
                .unwrap();
        assert_eq!(basis_lower_bound(&d).unwrap(), 4.0);
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(basis_lower_bound(&ones).unwrap(), 1.0);
        assert_eq!(ones_lower_bound(&ones).unwrap(), 2.0);
        let d2 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        assert!((ones_lower_bound(&d2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_bound_matches_enumeration() {
        let a = ComplexMatrix::from_rows(vec![
            vec![
                Complex::new(2.0, 0.1),
                Complex::new(1.0, 0.3),
                Complex::new(0.7, 0.0),
            ],
            vec![
                Complex::new(1.2, -0.2),
                Complex::new(3.0, 0.0),
                Complex::new(0.9, 0.1),
            ],
            vec![
                Complex::new(0.4, 0.1),
                Complex::new(1.1, -0.1),
                Complex::new(2.2, 0.2),
            ],
        ])
        .unwrap();
        let enumerated = (0..3)
            .map(|i| {
                bounds_at(&a, &ComplexVector::basis(3, i).unwrap())
                    .unwrap()
                    .lower
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((basis_lower_bound(&a).unwrap() - enumerated).abs() < 1e-13);
    }

    #[test]
    fn refinement_examples() {
        let c = certify_matrix(&sym(), DEFAULT_TOL).unwrap();
        let seq = refine_bounds(&sym(), &c, 3).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!((seq[0].lower, seq[0].upper), (3.0, 3.0));

        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let c = certify_matrix(&ones, DEFAULT_TOL).unwrap();
        let seq = refine_bounds(&ones, &c, 2).unwrap();
        assert_eq!((seq[1].lower, seq[1].upper), (2.0, 2.0));

        let id = ComplexMatrix::identity(2);
        let c = certify_matrix(&id, DEFAULT_TOL).unwrap();
        assert!(matches!(
            refine_bounds(&id, &c, 2),
            Err(Error::NotStrict(_))
        ));
    }
}
