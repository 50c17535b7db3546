//! Verification suites. Each suite evaluates one module's invariants over
//! a sample set and returns a [`SuiteReport`].
//!
//! Random sample sets come from `curvibc_core::sampling` (ChaCha8 seeded
//! with the user's seed). When a fixed metric is supplied the flows, λ
//! pairs and frequencies follow a deterministic low-discrepancy sequence
//! instead, so no seed is involved.

pub mod dispersion;
pub mod eigen;
pub mod modified;
pub mod quasi3d;
pub mod transform;
pub mod wellposed;

use crate::report::{Check, Limit, SuiteReport};
use curvibc_core::dispersion::LambdaPair;
use curvibc_core::metrics::{compute_norms, contravariant};
use curvibc_core::sampling::{flow_with_contravariant, subsonic_samples, Sample, SampleSpec};
use curvibc_core::Metric;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Suite names accepted by `verify`.
pub const SUITES: [&str; 6] = ["dispersion", "eigen", "transform", "quasi3d", "wellposed", "modified"];

/// Inputs shared by every suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Seed of the random sample set. Required unless `metric` is set.
    pub seed: Option<u64>,
    /// Number of samples.
    pub samples: usize,
    /// Fixed metric replacing the random ones.
    pub metric: Option<Metric<f64>>,
    /// Tolerance overrides keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: Some(42), samples: 1000, metric: None, tolerances: BTreeMap::new() }
    }
}

impl SuiteOptions {
    /// Limit for `name`, honouring overrides.
    pub fn limit(&self, name: &str, default: Limit) -> Limit {
        match self.tolerances.get(name) {
            Some(&v) => default.with_value(v),
            None => default,
        }
    }

    /// Builds and evaluates a check with the effective limit.
    pub fn check(&self, name: &str, measured: f64, default: Limit, count: usize) -> Check {
        Check::new(name, measured, self.limit(name, default), count)
    }

    /// Subsonic sample set: random when no metric is fixed, otherwise the
    /// deterministic sequence on the fixed metric.
    pub fn subsonic(&self) -> Vec<Sample<f64>> {
        match (&self.metric, self.seed) {
            (Some(m), _) => fixed_metric_samples(m, self.samples),
            (None, Some(seed)) => subsonic_samples(seed, self.samples, &SampleSpec::default()),
            (None, None) => Vec::new(),
        }
    }

    /// Seed recorded in reports (`None` for deterministic sample sets).
    pub fn report_seed(&self) -> Option<u64> {
        if self.metric.is_some() {
            None
        } else {
            self.seed
        }
    }

    /// Empty report for `suite`.
    pub fn report(&self, suite: &str, samples: usize) -> SuiteReport {
        SuiteReport::new(suite, self.report_seed(), samples)
    }
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Deterministic samples on a fixed metric: Ū/|ξ| ∈ [0.1, 0.9),
/// V̄/|η|, W̄/|ζ| ∈ [−0.3, 0.3), |λ| ≤ 0.3, ω ∈ [1, 2), from additive
/// recurrences with irrational steps.
pub fn fixed_metric_samples(metric: &Metric<f64>, count: usize) -> Vec<Sample<f64>> {
    let n = compute_norms(metric);
    let steps = [
        0.618_033_988_749_894_9,
        0.414_213_562_373_095,
        0.732_050_807_568_877_2,
        0.236_067_977_499_79,
        0.645_751_311_064_590_6,
        0.316_624_790_355_4,
    ];
    (1..=count)
        .filter_map(|i| {
            let u = |k: usize| frac(i as f64 * steps[k]);
            let mach = 0.1 + 0.8 * u(0);
            let v = 0.3 * (2.0 * u(1) - 1.0);
            let w = 0.3 * (2.0 * u(2) - 1.0);
            let r = 0.3 * u(3).sqrt();
            let t = std::f64::consts::TAU * u(4);
            let flow = flow_with_contravariant(metric, mach * n.norm_xi, v * n.norm_eta, w * n.norm_zeta)?;
            Some(Sample {
                metric: *metric,
                flow,
                lambda: LambdaPair::real(r * t.cos(), r * t.sin()),
                omega: 1.0 + u(5),
            })
        })
        .collect()
}

/// Contravariant (Ū, V̄, W̄) of a sample, for reports.
pub fn sample_velocities(s: &Sample<f64>) -> [f64; 3] {
    let c = contravariant(&s.metric, &s.flow);
    [c.u_bar, c.v_bar, c.w_bar]
}

/// Runs one suite by name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Option<SuiteReport> {
    Some(match name {
        "dispersion" => dispersion::run(opts),
        "eigen" => eigen::run(opts),
        "transform" => transform::run(opts),
        "quasi3d" => quasi3d::run(opts),
        "wellposed" => wellposed::run(opts),
        "modified" => modified::run(opts),
        _ => return None,
    })
}
