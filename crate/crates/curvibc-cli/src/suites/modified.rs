//! Modified-condition suite: A₁ = A₃ = 0 for every valid metric, exact
//! Cartesian m₁ = m₂ = −(ū + 1)/2 with A₂ = 0, Taylor coefficients of
//! v̄₄ᴸ·u₅ᴿ extracted by Cauchy integrals, and full rank of the modified
//! inflow critical matrix on the ill-posed locus.

use super::{wellposed, SuiteOptions};
use crate::report::{Limit, MaxTracker, SuiteReport};
use curvibc_core::bc_modified::{compute_m, locus_ranks, modified_inflow_rows};
use curvibc_core::dispersion::LambdaPair;
use curvibc_core::eigenvectors::right_eigenvector;
use curvibc_core::metrics::{compute_norms, contravariant};
use curvibc_core::sampling::Sample;
use curvibc_core::wellposedness::truncated_v_left;
use curvibc_core::{Cx, MeanFlow, Metric, Vec5};

/// Mean velocities of the exact Cartesian checks.
pub const CARTESIAN_U: [f64; 5] = [0.125, 0.25, 0.5, 0.75, 0.875];

/// Radius and node count of the Cauchy contours in (λ₁, λ₂).
pub const CAUCHY_RADIUS: f64 = 0.05;
pub const CAUCHY_NODES: usize = 24;

/// Taylor coefficients (λ₁², λ₁λ₂, λ₂²) of `row(λ)·u₅ᴿ(λ)` from the
/// trapezoidal rule on the torus |λ₁| = |λ₂| = r.
pub fn quadratic_coefficients(
    s: &Sample<f64>,
    row: impl Fn(&LambdaPair<f64>) -> Option<Vec5<Cx<f64>>>,
    r: f64,
    nodes: usize,
) -> Option<[Cx<f64>; 3]> {
    let powers = [(2, 0), (1, 1), (0, 2)];
    let mut c = [Cx::new(0.0, 0.0); 3];
    for a in 0..nodes {
        for b in 0..nodes {
            let th = std::f64::consts::TAU * a as f64 / nodes as f64;
            let ph = std::f64::consts::TAU * b as f64 / nodes as f64;
            let lp = LambdaPair::new(Cx::from_polar(r, th), Cx::from_polar(r, ph));
            let v = row(&lp)?;
            let u = right_eigenvector(5, &s.metric, &s.flow, &lp).ok()?;
            let f: Cx<f64> = v.iter().zip(&u).map(|(x, y)| x * y).sum();
            for (k, (p, q)) in powers.iter().enumerate() {
                c[k] += f * Cx::from_polar(1.0, -(*p as f64) * th - (*q as f64) * ph) / r.powi(p + q);
            }
        }
    }
    let n = (nodes * nodes) as f64;
    Some(c.map(|v| v / n))
}

/// Runs the suite.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let samples = opts.subsonic();
    let mut rep = opts.report("modified", samples.len());

    let mut a13 = MaxTracker::default();
    let mut a2_size = MaxTracker::default();
    let mut degenerate = 0usize;
    let mut general_quad = MaxTracker::default();
    for (i, s) in samples.iter().enumerate() {
        match compute_m(&s.metric, &s.flow) {
            Ok(c) => {
                a13.add(c.a1.abs().max(c.a3.abs()));
                a2_size.add(c.a2.abs());
                if i < 50 {
                    let row = |lp: &LambdaPair<f64>| modified_inflow_rows(&s.metric, &s.flow, lp).ok().map(|r| r[3]);
                    if let Some(q) = quadratic_coefficients(s, row, CAUCHY_RADIUS, CAUCHY_NODES) {
                        general_quad.add(q[0].norm().max(q[2].norm()));
                    }
                }
            }
            Err(e) if e.name() == "DegenerateDenominator" => degenerate += 1,
            Err(_) => degenerate += 1,
        }
    }
    rep.push(
        opts.check("a1_a3_abs", a13.value, Limit::AtMost(1e-14), a13.count)
            .note(format!("{degenerate} samples with a degenerate m1/m2 denominator skipped")),
    );
    rep.push(
        opts.check("a2_abs_max", a2_size.value, Limit::Above(-1.0), a2_size.count)
            .note("reported only: A2 is computed, never assumed zero"),
    );
    rep.push(
        opts.check("general_metric_pure_quadratic", general_quad.value, Limit::Above(-1.0), general_quad.count)
            .note("reported only: on non-orthogonal grids the pure lambda1^2 and lambda2^2 terms of the modified row 4 do not cancel"),
    );

    let mut cart_bad = 0usize;
    for u in CARTESIAN_U {
        match compute_m(&Metric::cartesian(), &MeanFlow::nondimensional(u, 0.0, 0.0)) {
            Ok(c) => {
                let m = -(u + 1.0) / 2.0;
                cart_bad += usize::from(c.m1 != m || c.m2 != m || c.a1 != 0.0 || c.a2 != 0.0 || c.a3 != 0.0);
            }
            Err(_) => cart_bad += 1,
        }
    }
    rep.push(
        opts.check("cartesian_m_exact", cart_bad as f64, Limit::Exact(0.0), CARTESIAN_U.len())
            .note("m1 = m2 = -(u + 1)/2 and A1 = A2 = A3 = 0 exactly"),
    );

    let ortho = wellposed::samples(opts);
    let mut quad = MaxTracker::default();
    let mut a2_match = MaxTracker::default();
    let mut rank_bad = 0usize;
    let mut rank_q3_conf_bad = 0usize;
    let mut failures = 0usize;
    for s in &ortho {
        let (m, f) = (&s.metric, &s.flow);
        let (Ok(c), Some(cm), Some(cq)) = (
            compute_m(m, f),
            quadratic_coefficients(
                s,
                |lp| modified_inflow_rows(m, f, lp).ok().map(|r| r[3]),
                CAUCHY_RADIUS,
                CAUCHY_NODES,
            ),
            quadratic_coefficients(s, |lp| truncated_v_left(4, m, f, lp).ok(), CAUCHY_RADIUS, CAUCHY_NODES),
        ) else {
            failures += 1;
            continue;
        };
        quad.add(cm[0].norm().max(cm[2].norm()));
        let n = compute_norms(m);
        let u = contravariant(m, f).u_bar;
        let a1_unmodified = -0.5 * (u + n.norm_xi) * n.norm_eta * n.norm_eta;
        let kappa = cq[0] / a1_unmodified;
        a2_match.add((cm[1] - kappa * c.a2).norm() / kappa.norm().max(f64::MIN_POSITIVE));
        let (l, mm) = s.wavenumbers();
        match locus_ranks(m, f, l, mm) {
            Ok(r) => {
                rank_bad += usize::from(r.modified_confluent != 4 || r.quasi3d != 2);
                rank_q3_conf_bad += usize::from(r.quasi3d_confluent != 3);
            }
            Err(_) => failures += 1,
        }
    }
    let n = ortho.len();
    rep.push(
        opts.check("orthogonal_pure_quadratic", quad.value, Limit::AtMost(1e-10), quad.count)
            .note("lambda1^2 and lambda2^2 coefficients of modified row4 . u5R by Cauchy integrals"),
    );
    rep.push(
        opts.check("a2_closed_form_vs_expansion", a2_match.value, Limit::AtMost(1e-10), a2_match.count)
            .note("lambda1 lambda2 coefficient against A2, normalised by the quasi-3D lambda1^2 coefficient"),
    );
    rep.push(
        opts.check("locus_rank_violations", rank_bad as f64, Limit::Exact(0.0), n)
            .note("modified confluent rank 4 and quasi-3D rank 2 on the ill-posed locus"),
    );
    rep.push(
        opts.check("quasi3d_confluent_rank_violations", rank_q3_conf_bad as f64, Limit::Exact(0.0), n)
            .note("quasi-3D rank 3 in the confluent basis: one ill-posed mode remains"),
    );
    rep.push(opts.check("evaluation_failures", failures as f64, Limit::Exact(0.0), n));
    rep
}
