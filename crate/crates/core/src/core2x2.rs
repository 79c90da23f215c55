//! Exact formulas on single 2×2 complex matrices.
//!
//! A matrix `M = [[a, b], [c, d]]` acts on the Riemann sphere through the
//! linear fractional map `R(z) = (a z + b) / (c z + d)`. Everything the
//! certifier needs reduces to three real quantities of `M`:
//!
//! * `det = a d − b c`,
//! * `R = Re(a d̄ + b c̄)`,
//! * the four sign products `Re(a b̄)`, `Re(a c̄)`, `Re(b d̄)`, `Re(c d̄)`.
//!
//! They are tied together by the identity
//! `|a d̄ + b c̄|² − |det|² = 4 Re(a b̄) Re(c d̄)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::Complex;

/// A point of the Riemann sphere `ℂ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiemannPoint {
    Finite(Complex),
    Infinity,
}

impl RiemannPoint {
    pub fn finite(z: Complex) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(Self::Finite(z))
        } else {
            Err(Error::NonFinite(format!("{z}")))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// Homogeneous coordinates `(z, 1)` or `(1, 0)`.
    fn homogeneous(&self) -> (Complex, Complex) {
        match *self {
            Self::Finite(z) => (z, Complex::new(1.0, 0.0)),
            Self::Infinity => (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)),
        }
    }
}

impl From<Complex> for RiemannPoint {
    fn from(z: Complex) -> Self {
        Self::Finite(z)
    }
}

/// `num / den` on the Riemann sphere, with `x / 0 = ∞` for `x ≠ 0`.
fn ratio(num: Complex, den: Complex) -> RiemannPoint {
    if den == Complex::new(0.0, 0.0) {
        RiemannPoint::Infinity
    } else {
        RiemannPoint::Finite(num / den)
    }
}

/// Row-major complex 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

/// Image of the closed right half-plane (with `∞`) under a linear fractional map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskOrHalfPlane {
    Disk {
        center: Complex,
        radius: f64,
    },
    /// `{ w : Re(w · conj(normal)) ≥ offset }` with `|normal| = 1`.
    HalfPlane {
        normal: Complex,
        offset: f64,
    },
    Point(RiemannPoint),
    Empty,
}

/// The four contraction numbers of a matrix. Entries may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeltaQuadruple {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl DeltaQuadruple {
    pub const ZERO: Self = Self {
        d1: 0.0,
        d2: 0.0,
        d3: 0.0,
        d4: 0.0,
    };

    /// Componentwise maximum.
    pub fn max(self, other: Self) -> Self {
        Self {
            d1: self.d1.max(other.d1),
            d2: self.d2.max(other.d2),
            d3: self.d3.max(other.d3),
            d4: self.d4.max(other.d4),
        }
    }

    /// `Δ₁ + Δ₂/2 + Δ₃/2 + Δ₄/4`, the exponent of the refined rate.
    pub fn weighted_sum(&self) -> f64 {
        self.d1 + 0.5 * self.d2 + 0.5 * self.d3 + 0.25 * self.d4
    }

    /// `4Δ₁ + 2Δ₂ + 2Δ₃ + Δ₄`, the bound on the image diameter.
    pub fn diameter_bound(&self) -> f64 {
        4.0 * self.d1 + 2.0 * self.d2 + 2.0 * self.d3 + self.d4
    }
}

/// `log((p + q) / (p − q))` for `p ≥ q ≥ 0`; `+∞` when the ratio degenerates.
fn log_ratio(p: f64, q: f64) -> f64 {
    if q == 0.0 && p > 0.0 {
        0.0
    } else if p > q {
        ((p + q) / (p - q)).ln()
    } else {
        f64::INFINITY
    }
}

fn check_finite(z: Complex, what: &str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(format!("{what} = {z}")))
    }
}

impl Complex2x2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        Ok(Self {
            a: check_finite(a, "a")?,
            b: check_finite(b, "b")?,
            c: check_finite(c, "c")?,
            d: check_finite(d, "d")?,
        })
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub(crate) fn from_entries(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        let z = Complex::new(0.0, 0.0);
        Self::from_entries(z, z, z, z)
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
        Self::from_entries(o, z, z, o)
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.a, self.c, self.b, self.d)
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::from_entries(s * self.a, s * self.b, s * self.c, s * self.d)
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    /// `a d̄ + b c̄`.
    pub fn cross_sum(&self) -> Complex {
        self.a * self.d.conj() + self.b * self.c.conj()
    }

    /// `Re(a d̄ + b c̄)`.
    pub fn real_cross_sum(&self) -> f64 {
        self.cross_sum().re
    }

    /// Squared Frobenius norm.
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    /// `[Re(a b̄), Re(a c̄), Re(b d̄), Re(c d̄)]`.
    pub fn sign_products(&self) -> [f64; 4] {
        [
            (self.a * self.b.conj()).re,
            (self.a * self.c.conj()).re,
            (self.b * self.d.conj()).re,
            (self.c * self.d.conj()).re,
        ]
    }

    pub fn is_zero(&self) -> bool {
        let z = Complex::new(0.0, 0.0);
        self.a == z && self.b == z && self.c == z && self.d == z
    }

    /// Membership in the open class: all sign products `> tol·‖M‖²` and
    /// `|det| < Re(a d̄ + b c̄) − tol·‖M‖²`.
    pub fn in_gamma_open(&self, tol: f64) -> bool {
        let eps = tol * self.norm_sqr();
        self.sign_products().iter().all(|&s| s > eps)
            && self.det().norm() < self.real_cross_sum() - eps
    }

    /// Membership in the closed class: all sign products `≥ −tol·‖M‖²` and
    /// `|det| ≤ Re(a d̄ + b c̄) + tol·‖M‖²`.
    pub fn in_gamma_closed(&self, tol: f64) -> bool {
        let eps = tol * self.norm_sqr();
        self.sign_products().iter().all(|&s| s >= -eps)
            && self.det().norm() <= self.real_cross_sum() + eps
    }

    /// `|det| / Re(a d̄ + b c̄)`, or `None` when the denominator is not positive.
    pub fn theta2(&self) -> Option<f64> {
        let r = self.real_cross_sum();
        (r > 0.0).then(|| self.det().norm() / r)
    }

    /// The contraction numbers Δ₁–Δ₄. Meaningful for matrices in the open
    /// class; degenerate subexpressions give `+∞`.
    pub fn deltas(&self) -> DeltaQuadruple {
        let det = self.det().norm();
        let r = self.real_cross_sum();
        let s2 = (self.a * self.d.conj() + self.b.conj() * self.c).norm();
        let s3 = self.cross_sum().norm();
        let ad = self.a.norm() * self.d.norm();
        let bc = self.b.norm() * self.c.norm();
        let d4 = if ad > 0.0 && bc > 0.0 {
            (ad.ln() - bc.ln()).abs()
        } else {
            f64::INFINITY
        };
        DeltaQuadruple {
            d1: log_ratio(r, det),
            d2: log_ratio(s2, det),
            d3: log_ratio(s3, det),
            d4,
        }
    }

    /// Rank with the determinant compared against `tol·‖M‖²` and the matrix
    /// norm against `tol`.
    pub fn rank_of(&self, tol: f64) -> u8 {
        let n2 = self.norm_sqr();
        if self.det().norm() > tol * n2 {
            2
        } else if n2.sqrt() > tol {
            1
        } else {
            0
        }
    }

    /// Rank-one test used by the modulus bounds and disk images: the
    /// determinant is negligible against its own two terms.
    fn is_rank_deficient(&self) -> bool {
        let scale = self.a.norm() * self.d.norm() + self.b.norm() * self.c.norm();
        self.det().norm() <= crate::DEFAULT_TOL * scale
    }

    /// `|a/c|`, or `|b/d|` when the first column is the smaller one.
    fn rank_one_modulus(&self) -> f64 {
        let (num, den) = if self.a.norm() + self.c.norm() >= self.b.norm() + self.d.norm() {
            (self.a, self.c)
        } else {
            (self.b, self.d)
        };
        if den.norm() == 0.0 {
            f64::INFINITY
        } else {
            num.norm() / den.norm()
        }
    }

    fn check_modulus_domain(&self) -> Result<()> {
        let [ab, _, _, cd] = self.sign_products();
        let tol = crate::DEFAULT_TOL;
        if ab < -tol * self.a.norm() * self.b.norm() || cd < -tol * self.c.norm() * self.d.norm() {
            return Err(Error::Domain(format!(
                "modulus bounds need Re(a b̄) ≥ 0 and Re(c d̄) ≥ 0, got {ab:e} and {cd:e}"
            )));
        }
        Ok(())
    }

    /// φ(M): infimum of `|R(z)|` over the closed right half-plane.
    ///
    /// Rank two: `2 Re(a b̄) / (|a d̄ + b c̄| + |det|)`. Rank one: `|a/c|`
    /// (or `|b/d|`). Zero matrix: `+∞`.
    pub fn inf_modulus(&self) -> Result<f64> {
        self.check_modulus_domain()?;
        if self.is_zero() {
            return Ok(f64::INFINITY);
        }
        if self.is_rank_deficient() {
            return Ok(self.rank_one_modulus());
        }
        let num = 2.0 * (self.a * self.b.conj()).re.max(0.0);
        Ok(num / (self.cross_sum().norm() + self.det().norm()))
    }

    /// Φ(M): supremum of `|R(z)|` over the closed right half-plane.
    ///
    /// Rank two: `(|a d̄ + b c̄| + |det|) / (2 Re(c d̄))`, `+∞` when
    /// `Re(c d̄) = 0`. Rank one: `|a/c|` (or `|b/d|`). Zero matrix: `0`.
    pub fn sup_modulus(&self) -> Result<f64> {
        self.check_modulus_domain()?;
        if self.is_zero() {
            return Ok(0.0);
        }
        if self.is_rank_deficient() {
            return Ok(self.rank_one_modulus());
        }
        let den = 2.0 * (self.c * self.d.conj()).re;
        if den <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok((self.cross_sum().norm() + self.det().norm()) / den)
    }

    /// `R(z) = (a z + b)/(c z + d)` on the Riemann sphere.
    pub fn apply(&self, z: RiemannPoint) -> RiemannPoint {
        match z {
            RiemannPoint::Finite(z) => ratio(self.a * z + self.b, self.c * z + self.d),
            RiemannPoint::Infinity => ratio(self.a, self.c),
        }
    }

    /// Image of the closed right half-plane under `R`.
    ///
    /// For `Re(c d̄) > 0` this is the disk with center
    /// `(a d̄ + b c̄) / (2 Re(c d̄))` and radius `|det| / (2 Re(c d̄))`.
    pub fn mobius_disk(&self) -> Result<DiskOrHalfPlane> {
        if self.is_zero() {
            return Ok(DiskOrHalfPlane::Empty);
        }
        if self.is_rank_deficient() {
            let col = if self.a.norm() + self.c.norm() >= self.b.norm() + self.d.norm() {
                (self.a, self.c)
            } else {
                (self.b, self.d)
            };
            return Ok(DiskOrHalfPlane::Point(ratio(col.0, col.1)));
        }
        let cd = (self.c * self.d.conj()).re;
        let eps = crate::DEFAULT_TOL * self.c.norm() * self.d.norm();
        if cd > eps {
            let den = 2.0 * cd;
            return Ok(DiskOrHalfPlane::Disk {
                center: self.cross_sum() / den,
                radius: self.det().norm() / den,
            });
        }
        if cd < -eps {
            return Err(Error::Domain(format!(
                "pole inside the half-plane (Re(c d̄) = {cd:e}); image is a disk exterior"
            )));
        }
        // Pole on the imaginary axis: R(H) = w0 + s·H.
        let (w0, s) = if self.c == Complex::new(0.0, 0.0) {
            (self.b / self.d, self.a / self.d)
        } else {
            (self.a / self.c, -self.det() / (self.c * self.c))
        };
        let k = s.inv();
        Ok(DiskOrHalfPlane::HalfPlane {
            normal: k.conj() / k.norm(),
            offset: (w0 * k).re / k.norm(),
        })
    }
}

impl fmt::Display for Complex2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Cross-ratio `[z₁, z₂; v₁, v₂] = (z₂ − v₁)(z₁ − v₂) / ((z₁ − v₁)(z₂ − v₂))`.
///
/// Points at `∞` are handled through homogeneous coordinates. Configurations
/// where three points coincide are indeterminate.
pub fn cross_ratio(
    z1: RiemannPoint,
    z2: RiemannPoint,
    v1: RiemannPoint,
    v2: RiemannPoint,
) -> Result<RiemannPoint> {
    let bracket = |p: RiemannPoint, q: RiemannPoint| {
        let (p0, p1) = p.homogeneous();
        let (q0, q1) = q.homogeneous();
        p0 * q1 - q0 * p1
    };
    let num = bracket(z2, v1) * bracket(z1, v2);
    let den = bracket(z1, v1) * bracket(z2, v2);
    let zero = Complex::new(0.0, 0.0);
    if num == zero && den == zero {
        return Err(Error::Domain(
            "indeterminate cross-ratio (three coincident points)".into(),
        ));
    }
    Ok(ratio(num, den))
}

/// `δ₁(θ) = log((1 + θ)/(1 − θ))`.
pub fn delta1(theta: f64) -> f64 {
    if theta >= 1.0 {
        f64::INFINITY
    } else {
        ((1.0 + theta) / (1.0 - theta)).ln()
    }
}

/// `η₁(θ) = tanh(9 δ₁(θ) / 4)`, the Lipschitz rate from the contraction parameter.
pub fn eta1(theta: f64) -> f64 {
    (2.25 * delta1(theta)).tanh()
}
