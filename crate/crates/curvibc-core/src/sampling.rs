//! Seeded generators for metric/flow sample sets used by the verification
//! suites. All randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed
//! fixes the sample set on every platform.

use crate::dispersion::{preflight, LambdaPair};
use crate::linalg::singular_values;
use crate::metrics::{compute_norms, contravariant, inverse3, MeanFlow, Metric};
use crate::scalar::{cx, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Bounds for random subsonic samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Largest admissible condition number of the metric matrix.
    pub max_condition: f64,
    /// Range of Ū/|ξ|.
    pub mach_range: (f64, f64),
    /// Largest |λ| = √(λ₁² + λ₂²).
    pub max_lambda: f64,
    /// Largest |V̄|, |W̄| relative to |η|, |ζ|.
    pub max_tangential: f64,
    /// Smallest admissible Ψ₂/|ξ| and Ψ₃/|ξ|.
    pub min_psi_ratio: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { max_condition: 10.0, mach_range: (0.1, 0.9), max_lambda: 0.3, max_tangential: 0.3, min_psi_ratio: 0.05 }
    }
}

/// One random configuration: metric, nondimensional flow, real λ pair and
/// a real frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample<T> {
    pub metric: Metric<T>,
    pub flow: MeanFlow<T>,
    pub lambda: LambdaPair<T>,
    pub omega: T,
}

impl<T: Real> Sample<T> {
    /// Spanwise wavenumbers (l, m) = ω(λ₁, λ₂).
    pub fn wavenumbers(&self) -> (T, T) {
        (self.lambda.lambda1.re * self.omega, self.lambda.lambda2.re * self.omega)
    }
}

/// 2-norm condition number of a 3×3 real matrix.
pub fn condition_number<T: Real>(m: &Metric<T>) -> T {
    let rows: Vec<Vec<_>> = m.rows().iter().map(|r| r.iter().map(|&v| cx(v)).collect()).collect();
    let s = singular_values(&rows);
    match (s.first(), s.last()) {
        (Some(&a), Some(&b)) if b > T::zero() => a / b,
        _ => T::infinity(),
    }
}

/// Flow whose contravariant velocities are (Ū, V̄, W̄) for the metric.
pub fn flow_with_contravariant<T: Real>(metric: &Metric<T>, u: T, v: T, w: T) -> Option<MeanFlow<T>> {
    let inv = inverse3(&metric.rows())?;
    let c = [u, v, w];
    let vel: [T; 3] = std::array::from_fn(|i| inv[i][0] * c[0] + inv[i][1] * c[1] + inv[i][2] * c[2]);
    Some(MeanFlow::nondimensional(vel[0], vel[1], vel[2]))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn random_lambda<T: Real>(rng: &mut ChaCha8Rng, max: f64) -> LambdaPair<T> {
    let r = max * rng.gen::<f64>().sqrt();
    let t = uniform(rng, 0.0, std::f64::consts::TAU);
    LambdaPair::real(T::lit(r * t.cos()), T::lit(r * t.sin()))
}

fn accept<T: Real>(metric: &Metric<T>, spec: &SampleSpec) -> bool {
    if metric.validate().is_err() || condition_number(metric).as_f64() > spec.max_condition {
        return false;
    }
    let n = compute_norms(metric);
    let r = T::lit(spec.min_psi_ratio) * n.norm_xi;
    n.psi2 > r && n.psi3 > r
}

/// `count` general (non-orthogonal) subsonic samples.
pub fn subsonic_samples<T: Real>(seed: u64, count: usize, spec: &SampleSpec) -> Vec<Sample<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut r = [[0.0f64; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = uniform(&mut rng, -0.6, 0.6) + if i == j { uniform(&mut rng, 0.6, 1.6) } else { 0.0 };
            }
        }
        let metric = Metric::from_rows_unchecked(r.map(|row| row.map(T::lit)));
        if !accept(&metric, spec) {
            continue;
        }
        let n = compute_norms(&metric);
        let mach = uniform(&mut rng, spec.mach_range.0, spec.mach_range.1);
        let u = T::lit(mach) * n.norm_xi;
        let v = T::lit(uniform(&mut rng, -spec.max_tangential, spec.max_tangential)) * n.norm_eta;
        let w = T::lit(uniform(&mut rng, -spec.max_tangential, spec.max_tangential)) * n.norm_zeta;
        let Some(flow) = flow_with_contravariant(&metric, u, v, w) else {
            continue;
        };
        if preflight(&metric, &flow).is_err() {
            continue;
        }
        let lambda = random_lambda(&mut rng, spec.max_lambda);
        let omega = T::lit(uniform(&mut rng, 0.5, 2.0));
        out.push(Sample { metric, flow, lambda, omega });
    }
    out
}

/// `count` orthogonal-grid samples in the moving frame (V̄ = W̄ = 0): a
/// random rotation scaled row-wise by factors in [0.5, 2].
pub fn orthogonal_samples<T: Real>(seed: u64, count: usize, spec: &SampleSpec) -> Vec<Sample<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q: [f64; 4] = std::array::from_fn(|_| uniform(&mut rng, -1.0, 1.0));
        let qn = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(0.2..=1.0).contains(&qn) {
            continue;
        }
        let [a, b, c, d] = q.map(|v| v / qn);
        let rot = [
            [a * a + b * b - c * c - d * d, 2.0 * (b * c - a * d), 2.0 * (b * d + a * c)],
            [2.0 * (b * c + a * d), a * a - b * b + c * c - d * d, 2.0 * (c * d - a * b)],
            [2.0 * (b * d - a * c), 2.0 * (c * d + a * b), a * a - b * b - c * c + d * d],
        ];
        let s: [f64; 3] = std::array::from_fn(|_| uniform(&mut rng, 0.5, 2.0));
        let rows: [[f64; 3]; 3] = std::array::from_fn(|i| rot[i].map(|v| v * s[i]));
        let metric = Metric::from_rows_unchecked(rows.map(|row| row.map(T::lit)));
        if !accept(&metric, spec) {
            continue;
        }
        let n = compute_norms(&metric);
        let mach = uniform(&mut rng, spec.mach_range.0, spec.mach_range.1);
        let Some(flow) = flow_with_contravariant(&metric, T::lit(mach) * n.norm_xi, T::zero(), T::zero()) else {
            continue;
        };
        let lambda = random_lambda(&mut rng, spec.max_lambda);
        let omega = T::lit(uniform(&mut rng, 0.5, 2.0));
        out.push(Sample { metric, flow, lambda, omega });
    }
    out
}

/// Checks that a sample satisfies the [`SampleSpec`] bounds (used by tests).
pub fn within_spec<T: Real>(s: &Sample<T>, spec: &SampleSpec) -> bool {
    let n = compute_norms(&s.metric);
    let cf = contravariant(&s.metric, &s.flow);
    let mach = (cf.u_bar / n.norm_xi).as_f64();
    accept(&s.metric, spec)
        && mach >= spec.mach_range.0 - 1e-12
        && mach <= spec.mach_range.1 + 1e-12
        && s.lambda.magnitude().as_f64() <= spec.max_lambda + 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sets_are_reproducible_and_bounded() {
        let spec = SampleSpec::default();
        let a = subsonic_samples::<f64>(7, 50, &spec);
        let b = subsonic_samples::<f64>(7, 50, &spec);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| within_spec(s, &spec)));
        let o = orthogonal_samples::<f64>(7, 20, &spec);
        assert!(o.iter().all(|s| crate::metrics::is_orthogonal(&s.metric) && within_spec(s, &spec)));
        for s in &o {
            let c = contravariant(&s.metric, &s.flow);
            assert!(c.v_bar.abs() < 1e-12 && c.w_bar.abs() < 1e-12);
        }
    }
}
