//! Eigenvector suite: right and left kernel residuals of all five families
//! and biorthonormality of the λ → 0 limit vectors.

use super::SuiteOptions;
use crate::report::{Limit, MaxTracker, Record, SuiteReport};
use curvibc_core::eigenvectors::{limit_vectors, mode, Branch};
use curvibc_core::linalg::{cmat_vec, cnorm, cvec_cmat, dot5};
use curvibc_core::matrices::build_curvilinear;
use curvibc_core::metrics::compute_norms;
use curvibc_core::sampling::Sample;
use curvibc_core::{Cx, Mat5};

/// D* = −I + k*Ã + λ₁B̃ + λ₂C̃ for one mode.
fn pencil_star(s: &Sample<f64>, k_star: Cx<f64>) -> Option<Mat5<Cx<f64>>> {
    let [a, b, c] = build_curvilinear(&s.metric, &s.flow).ok()?;
    let (l1, l2) = (s.lambda.lambda1, s.lambda.lambda2);
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let diag = if i == j { Cx::new(-1.0, 0.0) } else { Cx::new(0.0, 0.0) };
            diag + k_star * a.m[i][j] + l1 * b.m[i][j] + l2 * c.m[i][j]
        })
    }))
}

fn frobenius(m: &Mat5<Cx<f64>>) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Runs the suite.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let samples = opts.subsonic();
    let mut rep = opts.report("eigen", samples.len());
    let mut right = MaxTracker::default();
    let mut left = MaxTracker::default();
    let mut diag = MaxTracker::default();
    let mut offdiag = MaxTracker::default();
    let mut w23 = MaxTracker::default();
    let mut w32_size = MaxTracker::default();
    let mut failures = 0usize;
    for (i, s) in samples.iter().enumerate() {
        for n in 1..=5 {
            let Ok(md) = mode(n, &s.metric, &s.flow, &s.lambda, Branch::Principal) else {
                failures += 1;
                continue;
            };
            let Some(d) = pencil_star(s, md.k_star) else {
                failures += 1;
                continue;
            };
            let scale = frobenius(&d);
            let rr = cnorm(&cmat_vec(&d, &md.right)) / (scale * cnorm(&md.right));
            let rl = cnorm(&cvec_cmat(&md.left, &d)) / (scale * cnorm(&md.left));
            right.add(rr);
            left.add(rl);
            rep.records.push(Record { sample: i, mode: Some(n), quantity: "right_residual".into(), value: rr });
            rep.records.push(Record { sample: i, mode: Some(n), quantity: "left_residual".into(), value: rl });
        }
        let Ok(lim) = limit_vectors(&s.metric, &s.flow) else {
            failures += 1;
            continue;
        };
        let nm = compute_norms(&s.metric);
        let (xy, xz) = (s.metric.xi_y, s.metric.xi_z);
        for a in 0..5 {
            for b in 0..5 {
                let p = dot5(&lim.left[a], &lim.right[b]);
                if a == b {
                    diag.add((p - 1.0).abs());
                } else if [0, 3, 4].contains(&a) || [0, 3, 4].contains(&b) {
                    offdiag.add(p.abs());
                } else if (a, b) == (1, 2) {
                    w23.add((p - xy * xz / (nm.psi3 * nm.psi3)).abs());
                } else {
                    w32_size.add((p - xy * xz / (nm.psi2 * nm.psi2)).abs());
                }
            }
        }
    }
    rep.push(opts.check("right_kernel_residual_rel", right.value, Limit::AtMost(1e-10), right.count));
    rep.push(opts.check("left_kernel_residual_rel", left.value, Limit::AtMost(1e-10), left.count));
    rep.push(opts.check("biorthonormal_diagonal", diag.value, Limit::AtMost(1e-12), diag.count));
    rep.push(
        opts.check("biorthogonal_modes_1_4_5", offdiag.value, Limit::AtMost(1e-12), offdiag.count)
            .note("off-diagonal products involving modes 1, 4 or 5"),
    );
    rep.push(
        opts.check("w2l_w3r_closed_form", w23.value, Limit::AtMost(1e-12), w23.count)
            .note("w2L.w3R = xi_y xi_z / psi3^2, nonzero whenever xi_y xi_z != 0"),
    );
    rep.push(
        opts.check("w3l_w2r_closed_form", w32_size.value, Limit::AtMost(1e-12), w32_size.count)
            .note("w3L.w2R = xi_y xi_z / psi2^2"),
    );
    rep.push(opts.check("evaluation_failures", failures as f64, Limit::Exact(0.0), samples.len()));
    rep
}
