//! Property tests over seeded random subsonic samples: metric covariance,
//! dispersion roots, eigenvector kernels, characteristic projections,
//! quasi-3D operator structure, the inflow locus and the modified
//! coefficients.

use curvibc_core::bc_first_order::{apply_1d, build_transform_with, Perturbation, Reconstruction, ScalingMode, Side};
use curvibc_core::bc_modified::compute_m;
use curvibc_core::bc_quasi3d::{build_first_order_operator, build_quasi3d, operator_from_taylor, Basis, BcOptions};
use curvibc_core::dispersion::roots_k;
use curvibc_core::eigenvectors::{mode, Branch};
use curvibc_core::linalg::{cdet, cmat_vec, cnorm, cvec_cmat};
use curvibc_core::matrices::{dispersion_determinant, dispersion_matrix, WaveVector};
use curvibc_core::metrics::{compute_norms, contravariant};
use curvibc_core::sampling::{orthogonal_samples, subsonic_samples, Sample, SampleSpec};
use curvibc_core::wellposedness::detect_illposed_inflow;
use curvibc_core::{Cx, Mat5, MeanFlow, Metric};
use proptest::prelude::*;

fn sample(seed: u64) -> Sample<f64> {
    subsonic_samples(seed, 1, &SampleSpec::default())[0]
}

fn orthogonal(seed: u64) -> Sample<f64> {
    orthogonal_samples(seed, 1, &SampleSpec::default())[0]
}

fn frobenius(m: &Mat5<Cx<f64>>) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_scale_with_the_metric(seed in any::<u64>(), s in 0.1f64..10.0) {
        let m = sample(seed).metric;
        let (a, b) = (compute_norms(&m), compute_norms(&m.scaled(s)));
        for (x, y) in [(a.norm_xi, b.norm_xi), (a.norm_eta, b.norm_eta), (a.norm_zeta, b.norm_zeta), (a.psi2, b.psi2), (a.psi3, b.psi3)] {
            prop_assert!(rel(y, s * x) < 1e-14);
        }
        for (x, y) in [(a.dot_xieta, b.dot_xieta), (a.dot_xizeta, b.dot_xizeta), (a.dot_etazeta, b.dot_etazeta)] {
            prop_assert!((y - s * s * x).abs() <= 1e-14 * s * s * (a.norm_xi + a.norm_eta + a.norm_zeta).powi(2));
        }
    }

    #[test]
    fn contravariant_velocity_is_linear(seed in any::<u64>(), c in -2.0f64..2.0) {
        let s = sample(seed);
        let [u, v, w] = s.flow.velocity();
        let a = contravariant(&s.metric, &s.flow);
        let b = contravariant(&s.metric, &MeanFlow::nondimensional(c * u, c * v, c * w));
        let scale = compute_norms(&s.metric).norm_xi.max(1.0) * (u.abs() + v.abs() + w.abs()).max(1.0);
        prop_assert!((b.u_bar - c * a.u_bar).abs() <= 1e-14 * scale * c.abs().max(1.0));
        prop_assert!((b.v_bar - c * a.v_bar).abs() <= 1e-14 * scale * c.abs().max(1.0) * 10.0);
        prop_assert!((b.w_bar - c * a.w_bar).abs() <= 1e-14 * scale * c.abs().max(1.0) * 10.0);
    }

    #[test]
    fn roots_annihilate_the_determinant(seed in any::<u64>()) {
        let s = sample(seed);
        let (l, m) = s.wavenumbers();
        let (l, m, w) = (Cx::new(l, 0.0), Cx::new(m, 0.0), Cx::new(s.omega, 0.0));
        let roots = roots_k(&s.metric, &s.flow, l, m, w).unwrap();
        for k in roots.k {
            let d = dispersion_matrix(&s.metric, &s.flow, &WaveVector { k, l, m, omega: w }).unwrap();
            let size = d.alpha.iter().map(|a| a.norm()).fold(d.beta.norm(), f64::max).max(s.omega.abs());
            prop_assert!(dispersion_determinant(&d).norm() <= 1e-9 * size.powi(5));
        }
    }

    #[test]
    fn factored_determinant_matches_lu(seed in any::<u64>(), k in -3.0f64..3.0) {
        let s = sample(seed);
        let (l, m) = s.wavenumbers();
        let d = dispersion_matrix(&s.metric, &s.flow, &WaveVector::real(k, l, m, s.omega)).unwrap();
        let rows: Vec<Vec<Cx<f64>>> = d.m.iter().map(|r| r.to_vec()).collect();
        let numeric = cdet(&rows);
        let size = frobenius(&d.m).powi(5);
        prop_assert!((dispersion_determinant(&d) - numeric).norm() <= 1e-10 * size);
    }

    #[test]
    fn roots_are_homogeneous(seed in any::<u64>(), c in 0.1f64..10.0) {
        let s = sample(seed);
        let (l, m) = s.wavenumbers();
        let at = |f: f64| roots_k(&s.metric, &s.flow, Cx::new(f * l, 0.0), Cx::new(f * m, 0.0), Cx::new(f * s.omega, 0.0)).unwrap();
        let (a, b) = (at(1.0), at(c));
        for (x, y) in a.k.iter().zip(&b.k) {
            prop_assert!((y - x * c).norm() <= 1e-12 * (x.norm() * c).max(1e-12));
        }
    }

    #[test]
    fn eigenvectors_span_the_kernels(seed in any::<u64>()) {
        let s = sample(seed);
        let (l1, l2) = (s.lambda.lambda1, s.lambda.lambda2);
        let [a, b, c] = curvibc_core::matrices::build_curvilinear(&s.metric, &s.flow).unwrap();
        for n in 1..=5 {
            let md = mode(n, &s.metric, &s.flow, &s.lambda, Branch::Principal).unwrap();
            let d: Mat5<Cx<f64>> = std::array::from_fn(|i| std::array::from_fn(|j| {
                let diag = if i == j { Cx::new(-1.0, 0.0) } else { Cx::new(0.0, 0.0) };
                diag + md.k_star * a.m[i][j] + l1 * b.m[i][j] + l2 * c.m[i][j]
            }));
            let scale = frobenius(&d);
            prop_assert!(cnorm(&cmat_vec(&d, &md.right)) <= 1e-10 * scale * cnorm(&md.right));
            prop_assert!(cnorm(&cvec_cmat(&md.left, &d)) <= 1e-10 * scale * cnorm(&md.left));
        }
    }

    #[test]
    fn projections_are_idempotent(seed in any::<u64>(), q in prop::array::uniform5(-1.0f64..1.0)) {
        let s = sample(seed);
        let t = build_transform_with(&s.metric, &s.flow, ScalingMode::Nondimensional, Reconstruction::ExactInverse).unwrap();
        for side in [Side::Inflow, Side::Outflow] {
            let once = apply_1d(&t, &Perturbation::from_array(q), side);
            let twice = apply_1d(&t, &once, side);
            let d = once.to_array().iter().zip(twice.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(d <= 1e-13 * t.to_char.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max).powi(2));
        }
    }

    #[test]
    fn dropping_lambda_terms_gives_the_first_order_operator(seed in any::<u64>()) {
        let s = sample(seed);
        for side in [Side::Inflow, Side::Outflow] {
            let reduced = operator_from_taylor(&s.metric, &s.flow, side, false).unwrap();
            let first = build_first_order_operator(&s.metric, &s.flow, side, BcOptions::default()).unwrap();
            prop_assert_eq!(&reduced.time_rows, &first.time_rows);
            prop_assert_eq!(&reduced.g, &first.g);
            prop_assert_eq!(&reduced.h, &first.h);
        }
    }

    #[test]
    fn acoustic_rows_are_mirror_images(seed in any::<u64>()) {
        let s = sample(seed);
        let opts = BcOptions { basis: Basis::Characteristic, ..Default::default() };
        let i = build_quasi3d(&s.metric, &s.flow, Side::Inflow, opts).unwrap();
        let o = build_quasi3d(&s.metric, &s.flow, Side::Outflow, opts).unwrap();
        let (g4, h4, g5, h5) = (i.g[3], i.h[3], o.g[0], o.h[0]);
        for c in [1, 2] {
            prop_assert!((g5[c] + g4[c]).abs() <= 1e-14);
            prop_assert!((h5[c] + h4[c]).abs() <= 1e-14);
        }
        prop_assert!((g5[4] - g4[3]).abs() <= 1e-14);
    }

    #[test]
    fn gamma_squares_cancel_on_the_locus(seed in any::<u64>()) {
        let s = orthogonal(seed);
        let (l, m) = s.wavenumbers();
        let f = detect_illposed_inflow(&s.metric, &s.flow, l, m).unwrap();
        prop_assert_eq!(f.rank, 2);
        prop_assert!(f.gamma_sum.unwrap().norm() <= 1e-12);
    }

    #[test]
    fn modified_pure_quadratic_coefficients_vanish(seed in any::<u64>()) {
        let s = sample(seed);
        if let Ok(c) = compute_m(&s.metric, &s.flow) {
            prop_assert!(c.a1.abs() <= 1e-14 && c.a3.abs() <= 1e-14);
        }
    }
}

#[test]
fn cartesian_modified_coefficients_are_exact() {
    for u in [0.125, 0.25, 0.5, 0.75, 0.875] {
        let c = compute_m(&Metric::cartesian(), &MeanFlow::nondimensional(u, 0.0, 0.0)).unwrap();
        assert_eq!((c.m1, c.m2), (-(u + 1.0) / 2.0, -(u + 1.0) / 2.0));
        assert_eq!((c.a1, c.a2, c.a3), (0.0, 0.0, 0.0));
    }
}

#[test]
fn single_precision_roots_follow_double_precision() {
    for seed in 0..20 {
        let s = sample(seed);
        let (l, m) = s.wavenumbers();
        let d = roots_k(&s.metric, &s.flow, Cx::new(l, 0.0), Cx::new(m, 0.0), Cx::new(s.omega, 0.0)).unwrap();
        let [u, v, w] = s.flow.velocity();
        let m32: Metric<f32> = s.metric.cast();
        let f32flow = MeanFlow::<f32>::nondimensional(u as f32, v as f32, w as f32);
        let r = roots_k(&m32, &f32flow, Cx::new(l as f32, 0.0), Cx::new(m as f32, 0.0), Cx::new(s.omega as f32, 0.0))
            .unwrap();
        for (a, b) in d.k.iter().zip(&r.k) {
            let diff = Cx::new(b.re as f64, b.im as f64) - a;
            assert!(diff.norm() <= 1e-3 * a.norm().max(1.0), "seed {seed}: {a} vs {b}");
        }
    }
}
