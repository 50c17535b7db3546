//! Quasi-3D suite: exact Cartesian tables, reduction to the first-order
//! operator, agreement of tables with Taylor rows, the row-4/row-5 table
//! relations, analytic λ-derivatives against central differences and the
//! O(ε²) modal absorption of the quasi-3D conditions against the O(ε)
//! absorption of the first-order ones.

use super::transform::{CARTESIAN_FLOWS, CARTESIAN_TO_CHAR};
use super::SuiteOptions;
use crate::report::{Limit, MaxTracker, MinTracker, SuiteReport};
use curvibc_core::bc_first_order::Side;
use curvibc_core::bc_quasi3d::{
    build_first_order_operator, build_quasi3d, modal_residual, operator_from_taylor, taylor_v_left, Basis, BcOperator,
    BcOptions,
};
use curvibc_core::dispersion::{star_terms, LambdaPair};
use curvibc_core::eigenvectors::{right_eigenvector, v_left};
use curvibc_core::linalg::cnorm;
use curvibc_core::sampling::Sample;
use curvibc_core::{Cx, MeanFlow, Metric, Vec5};

/// Step of the central differences.
pub const FD_STEP: f64 = 1e-6;

/// Incidence parameters of the absorption-order fit.
pub const EPSILONS: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Expected Cartesian primitive tables for mean velocity (u, v, w):
/// inflow G, inflow H, outflow time row, outflow G, outflow H.
#[allow(clippy::type_complexity)]
pub fn cartesian_tables(u: f64, v: f64, w: f64) -> ([Vec5<f64>; 4], [Vec5<f64>; 4], Vec5<f64>, Vec5<f64>, Vec5<f64>) {
    (
        [[0.0; 5], [0.0, u, v, 0.0, 1.0], [0.0, 0.0, 0.0, v, 0.0], [0.0, v, -u, 0.0, v]],
        [[0.0; 5], [0.0, 0.0, w, 0.0, 0.0], [0.0, u, 0.0, w, 1.0], [0.0, w, 0.0, -u, w]],
        [0.0, -1.0, 0.0, 0.0, 1.0],
        [0.0, -v, u, 0.0, v],
        [0.0, -w, 0.0, u, w],
    )
}

fn cartesian_mismatches() -> usize {
    let mut bad = 0;
    for [u, v, w] in CARTESIAN_FLOWS {
        let f = MeanFlow::nondimensional(u, v, w);
        let m = Metric::cartesian();
        let (gi, hi, to, go, ho) = cartesian_tables(u, v, w);
        match (
            build_quasi3d(&m, &f, Side::Inflow, BcOptions::default()),
            build_quasi3d(&m, &f, Side::Outflow, BcOptions::default()),
        ) {
            (Ok(a), Ok(b)) => {
                bad += usize::from(a.g != gi || a.h != hi);
                bad += usize::from(a.time_rows != CARTESIAN_TO_CHAR[..4]);
                bad += usize::from(b.time_rows != [to] || b.g != [go] || b.h != [ho]);
            }
            _ => bad += 1,
        }
    }
    bad
}

fn max_row_diff(a: &[Vec5<f64>], b: &[Vec5<f64>]) -> f64 {
    a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs())).fold(0.0, f64::max)
}

fn operator_scale(op: &BcOperator<f64>) -> f64 {
    op.time_rows.iter().chain(&op.g).chain(&op.h).flatten().fold(1.0f64, |a, v| a.max(v.abs()))
}

/// Least-squares slope of log10(residual) against log10(ε).
pub fn loglog_slope(eps: &[f64], res: &[f64]) -> f64 {
    let x: Vec<f64> = eps.iter().map(|e| e.log10()).collect();
    let y: Vec<f64> = res.iter().map(|r| r.log10()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Relative residual of `op` on mode `n` at λ = ε·(direction of the
/// sample's λ), for each ε.
pub fn modal_residuals(s: &Sample<f64>, op: &BcOperator<f64>, n: usize, eps: &[f64]) -> Option<Vec<f64>> {
    let (a, b) = (s.lambda.lambda1.re, s.lambda.lambda2.re);
    let r = (a * a + b * b).sqrt();
    let (da, db) = if r > 0.0 { (a / r, b / r) } else { (1.0, 0.0) };
    eps.iter()
        .map(|&e| {
            let lp = LambdaPair::real(e * da, e * db);
            let u = right_eigenvector(n, &s.metric, &s.flow, &lp).ok()?;
            let res = modal_residual(op, &u, lp.lambda1, lp.lambda2);
            let norm = res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            Some(norm / cnorm(&u))
        })
        .collect()
}

/// True when the acoustic prefactor P* = Ξ* + μ*Ū keeps the sign of Ū
/// along the sample's λ direction up to |λ| = `eps_max`. P* is affine in λ,
/// so the endpoint decides. A sign change swaps the k₄/k₅ labels and puts
/// the ray outside the convergence radius of the λ expansion.
pub fn continuous_labelling(s: &Sample<f64>, eps_max: f64) -> bool {
    let (a, b) = (s.lambda.lambda1.re, s.lambda.lambda2.re);
    let r = (a * a + b * b).sqrt();
    let (da, db) = if r > 0.0 { (a / r, b / r) } else { (1.0, 0.0) };
    let at = |e: f64| star_terms(&s.metric, &s.flow, &LambdaPair::real(e * da, e * db)).ok().map(|t| t.p.re);
    matches!((at(0.0), at(eps_max)), (Some(p0), Some(p1)) if p0 * p1 > 0.0)
}

/// Largest |analytic − central difference| over the two λ-derivatives of
/// vₙᴸ at λ = 0.
pub fn taylor_fd_error(s: &Sample<f64>, n: usize, h: f64) -> Option<f64> {
    let t = taylor_v_left(n, &s.metric, &s.flow).ok()?;
    let at = |l1: f64, l2: f64| v_left(n, &s.metric, &s.flow, &LambdaPair::real(l1, l2)).ok();
    let (p1, m1, p2, m2) = (at(h, 0.0)?, at(-h, 0.0)?, at(0.0, h)?, at(0.0, -h)?);
    let v0 = at(0.0, 0.0)?;
    let mut worst: f64 = 0.0;
    for j in 0..5 {
        let d1: Cx<f64> = (p1[j] - m1[j]) / (2.0 * h);
        let d2: Cx<f64> = (p2[j] - m2[j]) / (2.0 * h);
        worst = worst.max((d1 - t.d_lambda1[j]).norm()).max((d2 - t.d_lambda2[j]).norm()).max((v0[j] - t.v0[j]).norm());
    }
    Some(worst)
}

/// Runs the suite.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let samples = opts.subsonic();
    let mut rep = opts.report("quasi3d", samples.len());
    rep.push(
        opts.check("cartesian_tables_exact", cartesian_mismatches() as f64, Limit::Exact(0.0), CARTESIAN_FLOWS.len())
            .note("primitive G/H tables and time rows equal the Cartesian reductions entry for entry"),
    );

    let mut reduction = MaxTracker::default();
    let mut tables = MaxTracker::default();
    let mut relations = MaxTracker::default();
    let mut fd = MaxTracker::default();
    let mut slope_dev = MaxTracker::default();
    let mut slope_in5 = MaxTracker::default();
    let mut vort_exact = MaxTracker::default();
    let mut slope_first_in = MaxTracker::default();
    let mut slope_first_vort = MaxTracker::default();
    let mut slope_first_acoustic = MinTracker::default();
    let mut beyond_radius = 0usize;
    let mut failures = 0usize;
    let char_opts = BcOptions { basis: Basis::Characteristic, ..Default::default() };
    for s in &samples {
        let (m, f) = (&s.metric, &s.flow);
        for side in [Side::Inflow, Side::Outflow] {
            let built = (
                operator_from_taylor(m, f, side, false),
                build_first_order_operator(m, f, side, BcOptions::default()),
                operator_from_taylor(m, f, side, true),
                build_quasi3d(m, f, side, BcOptions::default()),
            );
            let (Ok(t0), Ok(fo), Ok(t1), Ok(q3)) = built else {
                failures += 1;
                continue;
            };
            let sc = operator_scale(&fo);
            reduction.add(
                max_row_diff(&t0.time_rows, &fo.time_rows)
                    .max(max_row_diff(&t0.g, &fo.g))
                    .max(max_row_diff(&t0.h, &fo.h))
                    / sc,
            );
            let sc = operator_scale(&q3);
            tables.add(max_row_diff(&t1.g, &q3.g).max(max_row_diff(&t1.h, &q3.h)) / sc);
        }
        match (build_quasi3d(m, f, Side::Inflow, char_opts), build_quasi3d(m, f, Side::Outflow, char_opts)) {
            (Ok(i), Ok(o)) => {
                let (g4, h4, g5, h5) = (i.g[3], i.h[3], o.g[0], o.h[0]);
                let mut d: f64 = 0.0;
                for c in [1, 2] {
                    d = d.max((g5[c] + g4[c]).abs()).max((h5[c] + h4[c]).abs());
                }
                d = d.max((g5[4] - g4[3]).abs());
                relations.add(d);
            }
            _ => failures += 1,
        }
        for n in 1..=5 {
            match taylor_fd_error(s, n, FD_STEP) {
                Some(e) => fd.add(e),
                None => failures += 1,
            }
        }
        let ops = (
            build_quasi3d(m, f, Side::Outflow, BcOptions::default()),
            build_quasi3d(m, f, Side::Inflow, BcOptions::default()),
            build_first_order_operator(m, f, Side::Outflow, BcOptions::default()),
            build_first_order_operator(m, f, Side::Inflow, BcOptions::default()),
        );
        let (Ok(out), Ok(inf), Ok(fo_out), Ok(fo_in)) = ops else {
            failures += 1;
            continue;
        };
        let slope =
            |op: &BcOperator<f64>, n: usize| modal_residuals(s, op, n, &EPSILONS).map(|r| loglog_slope(&EPSILONS, &r));
        if continuous_labelling(s, EPSILONS[0]) {
            match (slope(&out, 4), slope(&inf, 5), slope(&fo_in, 5), slope(&fo_out, 4)) {
                (Some(a), Some(b), Some(c), Some(d)) => {
                    slope_dev.add((a - 2.0).abs());
                    slope_in5.add((b - 2.0).abs());
                    slope_first_in.add((c - 1.0).abs());
                    slope_first_acoustic.add(d);
                }
                _ => failures += 1,
            }
        } else {
            beyond_radius += 1;
        }
        for n in [2, 3] {
            match (modal_residuals(s, &out, n, &EPSILONS), slope(&fo_out, n)) {
                (Some(r), Some(sf)) => {
                    r.iter().for_each(|&v| vort_exact.add(v));
                    slope_first_vort.add((sf - 1.0).abs());
                }
                _ => failures += 1,
            }
        }
    }
    rep.push(opts.check("taylor_reduction_to_first_order", reduction.value, Limit::AtMost(1e-14), reduction.count));
    rep.push(opts.check("taylor_rows_vs_tables", tables.value, Limit::AtMost(1e-13), tables.count));
    rep.push(
        opts.check("row4_row5_relations", relations.value, Limit::AtMost(1e-14), relations.count)
            .note("g5i = -g4i and h5i = -h4i for i = 2, 3; g55 = g44"),
    );
    rep.push(
        opts.check("taylor_vs_central_difference", fd.value, Limit::AtMost(1e-6), fd.count)
            .note(format!("all five modes, step {FD_STEP:e}")),
    );
    let radius_note = format!(
        "{beyond_radius} samples skipped: the acoustic prefactor Xi* + mu* U changes sign for |lambda| <= {}, so the mode labels swap inside the eps range",
        EPSILONS[0]
    );
    rep.push(
        opts.check("outflow_absorption_slope_dev", slope_dev.value, Limit::AtMost(0.1), slope_dev.count)
            .note(format!("|slope - 2| of the outflow residual on the outgoing acoustic mode 4 over eps = 1e-1, 1e-2, 1e-3; {radius_note}")),
    );
    rep.push(
        opts.check("inflow_acoustic_slope_dev", slope_in5.value, Limit::AtMost(0.1), slope_in5.count)
            .note("|slope - 2| of the inflow residual on the outgoing acoustic mode 5"),
    );
    rep.push(
        opts.check("outflow_vorticity_residual", vort_exact.value, Limit::AtMost(1e-12), vort_exact.count)
            .note("the quasi-3D outflow row absorbs the vorticity modes 2 and 3 exactly"),
    );
    rep.push(
        opts.check("first_order_inflow_slope_dev", slope_first_in.value, Limit::AtMost(0.1), slope_first_in.count)
            .note("|slope - 1|: the first-order inflow rows absorb mode 5 to O(eps) only"),
    );
    rep.push(
        opts.check(
            "first_order_outflow_vorticity_slope_dev",
            slope_first_vort.value,
            Limit::AtMost(0.1),
            slope_first_vort.count,
        )
        .note("|slope - 1|: the first-order outflow row absorbs modes 2 and 3 to O(eps) only"),
    );
    rep.push(
        opts.check(
            "first_order_outflow_acoustic_slope_min",
            slope_first_acoustic.value,
            Limit::Above(-1.0),
            slope_first_acoustic.count,
        )
        .note("reported only: on mode 4 the first-order outflow row is already O(eps^2)"),
    );
    rep.push(opts.check("evaluation_failures", failures as f64, Limit::Exact(0.0), samples.len()));
    rep
}
