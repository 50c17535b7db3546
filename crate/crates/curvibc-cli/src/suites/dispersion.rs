//! Dispersion suite: closed-form k-roots against pencil eigenvalues, the
//! factored determinant against an LU determinant, root substitution,
//! branch consistency for growing frequencies, homogeneity and the
//! subsonic classification.

use super::SuiteOptions;
use crate::oracle::{lu_determinant, matched_error, pencil_roots};
use crate::report::{Limit, MaxTracker, SuiteReport};
use curvibc_core::dispersion::{roots_k, Direction};
use curvibc_core::matrices::{dispersion_determinant, dispersion_matrix, WaveVector};
use curvibc_core::metrics::{compute_norms, contravariant};
use curvibc_core::Cx;

/// Complex wavenumber at which the determinant identity is probed, away
/// from every root: k = ω·(0.37 + 0.21i)·(1 + sample/count).
fn probe_k(omega: f64, i: usize, n: usize) -> Cx<f64> {
    Cx::new(0.37, 0.21) * (omega * (1.0 + i as f64 / n.max(1) as f64))
}

/// Runs the suite.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let samples = opts.subsonic();
    let mut rep = opts.report("dispersion", samples.len());
    let mut roots_err = MaxTracker::default();
    let mut det_err = MaxTracker::default();
    let mut subst = MaxTracker::default();
    let mut homog = MaxTracker::default();
    let mut branch_violations = 0usize;
    let mut class_violations = 0usize;
    let mut failures = 0usize;
    for (i, s) in samples.iter().enumerate() {
        let (l, m) = s.wavenumbers();
        let (lc, mc, wc) = (Cx::new(l, 0.0), Cx::new(m, 0.0), Cx::new(s.omega, 0.0));
        let Ok(roots) = roots_k(&s.metric, &s.flow, lc, mc, wc) else {
            failures += 1;
            continue;
        };
        let Some(reference) = pencil_roots(&s.metric, &s.flow, l, m, s.omega) else {
            failures += 1;
            continue;
        };
        let scale = reference.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        roots_err.add(matched_error(&roots.k, &reference, scale));

        let n = compute_norms(&s.metric);
        for k in roots.k {
            let Ok(d) = dispersion_matrix(&s.metric, &s.flow, &WaveVector { k, l: lc, m: mc, omega: wc }) else {
                failures += 1;
                continue;
            };
            let size = d.alpha.iter().map(|a| a.norm()).fold(d.beta.norm(), f64::max);
            subst.add(lu_determinant(&d.m).norm() / size.powi(5).max(f64::MIN_POSITIVE));
        }

        let k = probe_k(s.omega, i, samples.len());
        if let Ok(d) = dispersion_matrix(&s.metric, &s.flow, &WaveVector { k, l: lc, m: mc, omega: wc }) {
            let lu = lu_determinant(&d.m);
            det_err.add((dispersion_determinant(&d) - lu).norm() / lu.norm());
        } else {
            failures += 1;
        }

        let sc = 2.7;
        if let Ok(scaled) = roots_k(&s.metric, &s.flow, lc * sc, mc * sc, wc * sc) {
            let worst = roots.k.iter().zip(&scaled.k).map(|(a, b)| (a * sc - b).norm()).fold(0.0, f64::max);
            homog.add(worst / (sc * scale));
        } else {
            failures += 1;
        }

        let wg = Cx::new(s.omega, 0.05 * s.omega);
        match roots_k(&s.metric, &s.flow, lc, mc, wg) {
            Ok(r) if r.k[3].im > 0.0 && r.k[4].im < 0.0 => {}
            Ok(_) => branch_violations += 1,
            Err(_) => failures += 1,
        }

        let u = contravariant(&s.metric, &s.flow).u_bar;
        let inc = roots
            .class
            .iter()
            .take(4)
            .all(|c| c.at_inflow == Direction::Incoming && c.at_outflow == Direction::Outgoing);
        let out5 = roots.class[4].at_inflow == Direction::Outgoing && roots.class[4].at_outflow == Direction::Incoming;
        if !(u > 0.0 && u < n.norm_xi && inc && out5) {
            class_violations += 1;
        }
    }
    let count = samples.len();
    rep.push(opts.check("roots_vs_pencil_rel", roots_err.value, Limit::AtMost(1e-9), roots_err.count));
    rep.push(opts.check("factored_vs_lu_det_rel", det_err.value, Limit::AtMost(1e-10), det_err.count));
    rep.push(
        opts.check("root_substitution_rel", subst.value, Limit::AtMost(1e-9), subst.count)
            .note("|det| at each root over max(|beta|, |alpha_a|)^5"),
    );
    rep.push(opts.check("homogeneity_rel", homog.value, Limit::AtMost(1e-12), homog.count));
    rep.push(
        opts.check("branch_violations", branch_violations as f64, Limit::Exact(0.0), count)
            .note("Im(omega) > 0 requires Im(k4) > 0 and Im(k5) < 0"),
    );
    rep.push(opts.check("classification_violations", class_violations as f64, Limit::Exact(0.0), count));
    rep.push(opts.check("evaluation_failures", failures as f64, Limit::Exact(0.0), count));
    rep
}
