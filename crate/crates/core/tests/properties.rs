mod common;

use std::f64::consts::{FRAC_PI_2, TAU};

use cone_gap::certify::{self, ComplexMatrix};
use cone_gap::core2x2::{self, cross_ratio, Complex2x2, DiskOrHalfPlane, RiemannPoint};
use cone_gap::kernel::{self, KernelGrid};
use cone_gap::{cone, spectral, Complex, ComplexVector, DEFAULT_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complex(scale: f64) -> impl Strategy<Value = Complex> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| Complex::new(re, im))
}

fn any_block() -> impl Strategy<Value = Complex2x2> {
    (complex(3.0), complex(3.0), complex(3.0), complex(3.0))
        .prop_map(|(a, b, c, d)| Complex2x2::new(a, b, c, d).unwrap())
}

/// Entries near the positive reals, filtered to the open class.
fn open_block() -> impl Strategy<Value = Complex2x2> {
    let entry = (0.1..3.0f64, -0.6..0.6f64).prop_map(|(re, im)| Complex::new(re, im));
    (entry.clone(), entry.clone(), entry.clone(), entry)
        .prop_map(|(a, b, c, d)| Complex2x2::new(a, b, c, d).unwrap())
        .prop_filter("open class", |m| m.in_gamma_open(1e-9))
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `log|[z₁, z₂; v₁, v₂]|` maximized over `z₁, z₂` on the circle `|w − c| = r`
/// and `v₁, v₂` on the imaginary axis, by a grid search plus pattern search.
fn sampled_disk_diameter(c: Complex, r: f64) -> f64 {
    let eval = |p: [f64; 4]| {
        let z = |t: f64| RiemannPoint::Finite(c + Complex::from_polar(r, t));
        let v = |s: f64| RiemannPoint::Finite(Complex::new(0.0, s.tan()));
        match cross_ratio(z(p[0]), z(p[1]), v(p[2]), v(p[3])) {
            Ok(RiemannPoint::Finite(w)) => w.norm().ln(),
            _ => f64::NEG_INFINITY,
        }
    };
    let g = 16;
    let mut best = ([0.0; 4], f64::NEG_INFINITY);
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                for l in 0..g {
                    let p = [
                        TAU * i as f64 / g as f64,
                        TAU * j as f64 / g as f64,
                        -FRAC_PI_2 + std::f64::consts::PI * (k as f64 + 0.5) / g as f64,
                        -FRAC_PI_2 + std::f64::consts::PI * (l as f64 + 0.5) / g as f64,
                    ];
                    let f = eval(p);
                    if f > best.1 {
                        best = (p, f);
                    }
                }
            }
        }
    }
    let mut step = 0.2;
    while step > 1e-10 {
        let mut improved = false;
        for axis in 0..4 {
            for sign in [-1.0, 1.0] {
                let mut p = best.0;
                p[axis] += sign * step;
                if axis >= 2 {
                    p[axis] = p[axis].clamp(-FRAC_PI_2 + 1e-12, FRAC_PI_2 - 1e-12);
                }
                let f = eval(p);
                if f > best.1 {
                    best = (p, f);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best.1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sign_identity(m in any_block()) {
        let lhs = m.cross_sum().norm_sqr() - m.det().norm_sqr();
        let [ab, _, _, cd] = m.sign_products();
        prop_assert!((lhs - 4.0 * ab * cd).abs() <= 1e-12 * m.norm_sqr() * m.norm_sqr());
    }

    #[test]
    fn delta_ordering(m in open_block()) {
        let d = m.deltas();
        let slack = 1e-9 * d.d1.max(1.0);
        prop_assert!(d.d4 <= d.d2 + slack && d.d2 <= d.d1 + slack, "{d:?}");
        prop_assert!(d.d4 <= d.d3 + slack && d.d3 <= d.d1 + slack, "{d:?}");
    }

    #[test]
    fn delta1_matches_theta(m in open_block()) {
        let theta = m.theta2().unwrap();
        prop_assert!((m.deltas().d1 - core2x2::delta1(theta)).abs() <= 1e-12);
    }

    #[test]
    fn open_class_maps_to_strict_disk(m in open_block()) {
        match m.mobius_disk().unwrap() {
            DiskOrHalfPlane::Disk { center, radius } => prop_assert!(center.re > radius),
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn modulus_bounds_match_disk(m in open_block(), seed in any::<u64>()) {
        let DiskOrHalfPlane::Disk { center, radius } = m.mobius_disk().unwrap() else {
            return Err(TestCaseError::fail("expected a disk"));
        };
        let (phi, big_phi) = (m.inf_modulus().unwrap(), m.sup_modulus().unwrap());
        prop_assert!(rel_close(big_phi, center.norm() + radius, 1e-12));
        prop_assert!(rel_close(phi, (center.norm() - radius).max(0.0), 1e-12));
        let mut rng = seeded(seed);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..1000 {
            let w = center + Complex::from_polar(radius, rng.random_range(0.0..TAU));
            lo = lo.min(w.norm());
            hi = hi.max(w.norm());
        }
        prop_assert!(hi <= big_phi * (1.0 + 1e-12) && lo >= phi * (1.0 - 1e-12));
        prop_assert!(hi >= big_phi * (1.0 - 1e-3));
        for _ in 0..200 {
            let z = Complex::new(rng.random_range(0.0..5.0), rng.random_range(-5.0..5.0));
            if let RiemannPoint::Finite(w) = m.apply(z.into()) {
                prop_assert!(w.norm() <= big_phi * (1.0 + 1e-9) && w.norm() >= phi * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn transpose_symmetries(m in any_block()) {
        let t = m.transpose();
        prop_assert_eq!(m.in_gamma_open(DEFAULT_TOL), t.in_gamma_open(DEFAULT_TOL));
        prop_assert_eq!(m.in_gamma_closed(DEFAULT_TOL), t.in_gamma_closed(DEFAULT_TOL));
        if let (Some(a), Some(b)) = (m.theta2(), t.theta2()) {
            prop_assert!(rel_close(a, b, 1e-12));
        }
        let (d, dt) = (m.deltas(), t.deltas());
        prop_assert!(d.d1 == dt.d1 || rel_close(d.d1, dt.d1, 1e-9));
        prop_assert!(d.d2 == dt.d3 || rel_close(d.d2, dt.d3, 1e-9));
        prop_assert!(d.d4 == dt.d4 || rel_close(d.d4, dt.d4, 1e-9));
    }

    #[test]
    fn theta_scale_invariance(m in open_block(), s in complex(4.0), d in proptest::array::uniform4(0.1..10.0f64)) {
        prop_assume!(s.norm() > 1e-3);
        let theta = m.theta2().unwrap();
        prop_assert!(rel_close(m.scale(s).theta2().unwrap(), theta, 1e-12));
        let dm = Complex2x2::new(m.a * d[0] * d[2], m.b * d[0] * d[3], m.c * d[1] * d[2], m.d * d[1] * d[3]).unwrap();
        prop_assert!(rel_close(dm.theta2().unwrap(), theta, 1e-12));
    }

    #[test]
    fn cross_ratio_chain(pts in proptest::collection::vec(complex(10.0), 5)) {
        for i in 0..5 {
            for j in i + 1..5 {
                prop_assume!((pts[i] - pts[j]).norm() > 0.5);
            }
        }
        let p = |k: usize| RiemannPoint::Finite(pts[k]);
        let (x, y, z, u, v) = (p(0), p(1), p(2), p(3), p(4));
        let get = |r: RiemannPoint| match r {
            RiemannPoint::Finite(w) => w,
            RiemannPoint::Infinity => Complex::new(f64::INFINITY, 0.0),
        };
        let lhs = get(cross_ratio(x, z, u, v).unwrap());
        let rhs = get(cross_ratio(x, y, u, v).unwrap()) * get(cross_ratio(y, z, u, v).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn delta1_is_image_diameter(m in open_block()) {
        let DiskOrHalfPlane::Disk { center, radius } = m.mobius_disk().unwrap() else {
            return Err(TestCaseError::fail("expected a disk"));
        };
        let sampled = sampled_disk_diameter(center, radius);
        let d1 = m.deltas().d1;
        prop_assert!(sampled <= d1 + 1e-9 * d1.max(1.0), "sampled {sampled} > {d1}");
        prop_assert!(sampled >= d1 - 1e-6 * d1.max(1.0), "sampled {sampled} < {d1}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_beta_matches_enumeration(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = seeded(seed);
        let x = common::cone_vector(&mut rng, n, 0.6);
        let y = common::cone_vector(&mut rng, n, 0.6);
        let b = cone::beta(&x, &y).unwrap();
        let b_rev = cone::beta(&y, &x).unwrap();
        prop_assume!(b * b_rev > 1.0 + 1e-6);
        // t y - α x stays in the cone on |α| = r for t ≤ r / β(y, x) and t ≥ r β(x, y),
        // and leaves it strictly between
        let r = 0.999;
        let check = |t: f64| {
            cone::preorder_sample_check(&y.scale(Complex::new(t, 0.0)), &x, 720, r).unwrap()
        };
        let gap_mid = r * (b / b_rev).sqrt();
        prop_assert!(!check(gap_mid), "check passed inside the gap at t = {gap_mid}");
        let (mut lo, mut hi) = (gap_mid, 2.0 * b + 1.0);
        for _ in 0..60 {
            let t = 0.5 * (lo + hi);
            if check(t) {
                hi = t;
            } else {
                lo = t;
            }
        }
        let sampled = hi / r;
        prop_assert!(sampled <= b * (1.0 + 1e-9), "sampled {sampled} > beta {b}");
        prop_assert!(sampled >= b * (1.0 - 1e-3), "sampled {sampled} << beta {b}");
    }

    #[test]
    fn metric_axioms(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = seeded(seed);
        let x = common::cone_vector(&mut rng, n, 0.7);
        let y = common::cone_vector(&mut rng, n, 0.7);
        let z = common::cone_vector(&mut rng, n, 0.7);
        let d = |p: &ComplexVector, q: &ComplexVector| cone::distance(p, q).unwrap().distance;
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
        prop_assert!(rel_close(d(&x, &y), d(&y, &x), 1e-12));
        prop_assert!(d(&x, &x) <= 1e-12);
        let s = Complex::from_polar(rng.random_range(0.1..10.0), rng.random_range(0.0..TAU));
        prop_assert!((d(&x.scale(s), &y) - d(&x, &y)).abs() <= 1e-9);
    }

    #[test]
    fn alpha_beta_duality(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = seeded(seed);
        let x = common::cone_vector(&mut rng, n, 0.7);
        let y = common::cone_vector(&mut rng, n, 0.7);
        let (a, b) = (cone::alpha(&x, &y).unwrap(), cone::beta(&y, &x).unwrap());
        prop_assert!((a * b - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = seeded(seed);
        let x = common::cone_vector(&mut rng, n, 0.78);
        let dec = cone::canonical_decompose(&x, DEFAULT_TOL).unwrap();
        prop_assert!(dec.u1.iter().chain(&dec.u2).all(|&u| u >= 0.0));
        prop_assert!((dec.lambda.norm() - 1.0).abs() < 1e-15);
        let back = dec.reconstruct();
        prop_assert!(back.sub_scaled(Complex::new(1.0, 0.0), &x).norm() <= 1e-12 * x.norm());
    }

    #[test]
    fn strict_certificate_is_sound(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = seeded(seed);
        let (a, cert) = common::strict_matrix(&mut rng, n, 0.25);
        let x = common::cone_vector(&mut rng, n, 0.7);
        let ax = a.mul_vec(&x).unwrap();
        prop_assert!(cone::member_open(&ax, 0.0));
        let y = common::cone_vector(&mut rng, n, 0.7);
        let chk = certify::contraction_witness_test(&a, &x, &y, &cert, 1e-9).unwrap();
        prop_assert!(chk.holds, "{chk:?}");
        prop_assert!(cert.eta_refined.unwrap() <= cert.eta_simple.unwrap());
    }

    #[test]
    fn preorder_is_preserved(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = seeded(seed);
        let (a, _) = common::strict_matrix(&mut rng, n, 0.25);
        let x = common::cone_vector(&mut rng, n, 0.6);
        let y = common::cone_vector(&mut rng, n, 0.6);
        let s: f64 = rng.random_range(1.0..2.0);
        let y = y.scale(Complex::new(1.0 / (cone::beta(&y, &x).unwrap() * s), 0.0));
        prop_assert!(cone::preorder_geq(&x, &y, 1e-12).unwrap());
        let (ax, ay) = (a.mul_vec(&x).unwrap(), a.mul_vec(&y).unwrap());
        prop_assert!(cone::preorder_geq(&ax, &ay, 1e-9).unwrap());
    }

    #[test]
    fn power_iteration_quality(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = seeded(seed);
        let (a, cert) = common::strict_matrix(&mut rng, n, 0.2);
        let t = spectral::power_eigen(&a, &cert, 1e-12, 10_000).unwrap();
        prop_assert!(t.converged);
        prop_assert!(t.residual <= 1e-8 * a.norm_fro());
        prop_assert!(t.dual_residual <= 1e-8 * a.norm_fro());
        prop_assert!((t.nu.pair(&t.h) - Complex::new(1.0, 0.0)).norm() < 1e-12);
        for _ in 0..10 {
            let x = common::cone_vector(&mut rng, n, 0.7);
            prop_assert!(t.nu.pair(&x).norm() > 0.0);
        }
        let oracle = spectral::dense_spectrum_oracle(&a).unwrap();
        prop_assert!((oracle[0] - t.lambda).norm() <= 1e-9 * t.lambda.norm());
    }

    #[test]
    fn kernel_subgrid_monotone(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let width: f64 = rng.random_range(0.3..3.0);
        let k = KernelGrid::uniform(7, 0.0, 1.0, |x, y| {
            Complex::from_polar((-(x - y) * (x - y) / width).exp(), 0.2 * (x - y))
        })
        .unwrap();
        let full = kernel::kernel_theta(&k, DEFAULT_TOL).unwrap();
        prop_assume!(full.theta.is_some());
        let keep: Vec<usize> = (0..7).filter(|_| rng.random_bool(0.6)).collect();
        prop_assume!(keep.len() >= 2);
        let sub = KernelGrid::from_fn(
            keep.iter().map(|&i| k.points()[i]).collect(),
            vec![1.0; keep.len()],
            |x, y| Complex::from_polar((-(x - y) * (x - y) / width).exp(), 0.2 * (x - y)),
        )
        .unwrap();
        let sub_theta = kernel::kernel_theta(&sub, DEFAULT_TOL).unwrap().theta.unwrap();
        prop_assert!(sub_theta <= full.theta.unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn nystrom_theta_consistency(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = seeded(seed);
        let shift: f64 = rng.random_range(0.0..0.3);
        let k = KernelGrid::uniform(n, -1.0, 1.0, |x, y| Complex::from_polar(1.0 + x * y * 0.5, shift * (x + y)))
            .unwrap();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..5.0)).collect();
        let k = k.with_weights(w).unwrap();
        let t = kernel::kernel_theta(&k, DEFAULT_TOL).unwrap().theta;
        let tn = certify::certify_matrix(&kernel::nystrom_matrix(&k), DEFAULT_TOL).unwrap().theta;
        match (t, tn) {
            (Some(a), Some(b)) => prop_assert!(rel_close(a, b, 1e-12)),
            (a, b) => prop_assert_eq!(a.is_some(), b.is_some()),
        }
    }

    #[test]
    fn sampled_mode_never_beats_exhaustive(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = seeded(seed);
        let a = common::perturbed_positive(&mut rng, n, 0.8);
        let full = certify::certify_matrix(&a, DEFAULT_TOL).unwrap();
        let sampled = certify::certify_matrix_sampled(&a, DEFAULT_TOL, 30, seed).unwrap();
        prop_assert!(!sampled.exhaustive);
        prop_assert!(sampled.class >= full.class);
        if let (Some(s), Some(f)) = (sampled.theta, full.theta) {
            prop_assert!(s <= f);
        }
    }
}

#[test]
fn certification_is_thread_count_independent() {
    let mut rng = seeded(99);
    let a = common::perturbed_positive(&mut rng, 12, 0.9);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let c1 = one.install(|| certify::certify_matrix(&a, DEFAULT_TOL).unwrap());
    let c4 = four.install(|| certify::certify_matrix(&a, DEFAULT_TOL).unwrap());
    assert_eq!(c1, c4);
}

#[test]
fn failing_matrix_reports_first_witness() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, -1.0], &[1.0, 1.0, 1.0]])
        .unwrap();
    let c = certify::certify_matrix(&a, DEFAULT_TOL).unwrap();
    assert_eq!(c.class, certify::CertificateClass::Fail);
    let w = c.witness.unwrap();
    assert!(!w.block.in_gamma_closed(DEFAULT_TOL));
    assert_eq!(
        certify::submatrix_t(&a, w.i, w.j, w.p, w.q).unwrap(),
        w.block
    );
}
