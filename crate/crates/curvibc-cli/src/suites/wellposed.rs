//! Well-posedness suite on orthogonal grids: rank of the quasi-3D inflow
//! critical matrix on the ill-posed locus, the confluent roots k₃ = k₄ =
//! 1/Ū, the γ cancellation and the outflow sweep. Per-sample records hold
//! the locus frequency, the rank and the outflow minimum.

use super::{fixed_metric_samples, SuiteOptions};
use crate::report::{Limit, MaxTracker, MinTracker, Record, SuiteReport};
use curvibc_core::metrics::contravariant;
use curvibc_core::sampling::{orthogonal_samples, Sample, SampleSpec};
use curvibc_core::wellposedness::{detect_illposed_inflow, moving_frame, outflow_wellposed_check};

/// Side of the (l, m) outflow sweep grid.
pub const SWEEP: usize = 50;

/// Number of orthogonal samples for a requested sample count.
pub fn orthogonal_count(samples: usize) -> usize {
    (samples / 50).max(20)
}

/// Orthogonal sample set: seeded random orthogonal grids, or the fixed
/// metric with each deterministic flow moved to the frame V̄ = W̄ = 0. A
/// non-orthogonal fixed metric makes every evaluation fail.
pub fn samples(opts: &SuiteOptions) -> Vec<Sample<f64>> {
    let count = orthogonal_count(opts.samples);
    match (&opts.metric, opts.seed) {
        (Some(m), _) => fixed_metric_samples(m, count)
            .into_iter()
            .map(|s| Sample { flow: moving_frame(&s.metric, &s.flow).unwrap_or(s.flow), ..s })
            .collect(),
        (None, Some(seed)) => orthogonal_samples(seed, count, &SampleSpec::default()),
        (None, None) => Vec::new(),
    }
}

/// Runs the suite.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let set = samples(opts);
    let mut rep = opts.report("wellposed", set.len());
    let mut rank_bad = 0usize;
    let mut k_err = MaxTracker::default();
    let mut gamma = MaxTracker::default();
    let mut outflow = MinTracker::default();
    let mut failures = 0usize;
    for (i, s) in set.iter().enumerate() {
        let mut record = |quantity: &str, value: f64| {
            rep.records.push(Record { sample: i, mode: None, quantity: quantity.into(), value })
        };
        let (l, m) = s.wavenumbers();
        let u = contravariant(&s.metric, &s.flow).u_bar;
        match detect_illposed_inflow(&s.metric, &s.flow, l, m) {
            Ok(f) => {
                rank_bad += usize::from(f.rank != 2);
                record("inflow_rank", f.rank as f64);
                if let Some(w) = f.omega {
                    record("locus_omega_im", w.im);
                }
                match (f.k3, f.k4, f.gamma_sum) {
                    (Some(k3), Some(k4), Some(g)) => {
                        let target = 1.0 / u;
                        k_err.add((k3.re - target).abs().max(k3.im.abs()));
                        k_err.add((k4.re - target).abs().max(k4.im.abs()));
                        gamma.add(g.norm());
                    }
                    _ => failures += 1,
                }
            }
            Err(_) => failures += 1,
        }
        match outflow_wellposed_check(&s.metric, &s.flow, 1.0, SWEEP) {
            Ok(v) => {
                record("outflow_min_over_scale", v.min_abs / v.scale);
                outflow.add(v.min_abs / v.scale);
            }
            Err(_) => failures += 1,
        }
    }
    let n = set.len();
    rep.push(opts.check("orthogonal_samples", n as f64, Limit::Above(19.0), n));
    rep.push(
        opts.check("inflow_rank_not_2", rank_bad as f64, Limit::Exact(0.0), n)
            .note("numeric rank of the 4x4 inflow critical matrix on the locus, SVD threshold 1e-8"),
    );
    rep.push(opts.check("k3_k4_vs_inverse_u", k_err.value, Limit::AtMost(1e-10), k_err.count));
    rep.push(opts.check("gamma_square_sum", gamma.value, Limit::AtMost(1e-12), gamma.count));
    rep.push(
        opts.check("outflow_min_over_scale", outflow.value, Limit::Above(0.01), outflow.count)
            .note(format!("{SWEEP}x{SWEEP} (l, m) sweep; the outflow condition has no ill-posed mode")),
    );
    rep.push(opts.check("evaluation_failures", failures as f64, Limit::Exact(0.0), n));
    rep
}
