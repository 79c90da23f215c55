//! Certification of complexified cone contractions.
//!
//! A complex matrix `A` contracts the canonical complexification of the
//! positive orthant when every 2×2 block of matrix elements lies in a class of
//! contracting 2×2 matrices. From the worst block we obtain a contraction
//! parameter `θ`, a Lipschitz rate for the projective cone metric, and hence a
//! bound on the spectral gap of `A`. The same 2×2 machinery yields two-sided
//! variational (Collatz–Wielandt type) bounds on the leading eigenvalue.
//!
//! Modules, bottom-up:
//!
//! * [`core2x2`]: exact formulas on single 2×2 complex matrices.
//! * [`cone`]: membership, decomposition, pre-order and the projective metric.
//! * [`certify`]: block enumeration and contraction certificates.
//! * [`spectral`]: certified power iteration and spectrum oracles.
//! * [`variational`]: lower/upper bounds on `|λ₁|` at a test vector.
//! * [`kernel`]: sampled integral kernels and Nyström discretization.
//! * [`io`] and [`report`]: file formats and deterministic JSON reports.
//! * [`cli`]: the `cone-gap` command-line front end.

pub mod certify;
pub mod cli;
pub mod cone;
pub mod core2x2;
pub mod error;
pub mod io;
pub mod kernel;
pub mod report;
pub mod spectral;
pub mod variational;

pub use num_complex::Complex64 as Complex;

pub use certify::{CertificateClass, ComplexMatrix, ContractionCertificate};
pub use cone::{ComplexVector, DistanceResult};
pub use core2x2::{Complex2x2, DeltaQuadruple, DiskOrHalfPlane, RiemannPoint};
pub use error::{Error, Result};
pub use kernel::KernelGrid;
pub use spectral::EigenTriple;
pub use variational::VariationalBounds;

/// Default tolerance for strict/closed inequality tests, relative to the
/// squared scale of the data being tested.
pub const DEFAULT_TOL: f64 = 1e-12;
