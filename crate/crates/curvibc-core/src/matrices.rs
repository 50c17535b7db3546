//! Cartesian and curvilinear flux matrices of the linearized Euler equations
//! in primitive variables (ρ′, u′, v′, w′, p′), and the Fourier-space
//! dispersion matrix.

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff, zeros5};
use crate::metrics::{contravariant, MeanFlow, Metric};
use crate::scalar::{cx, Cx, Mat5, Real};
use serde::{Deserialize, Serialize};

/// Identifies which flux matrix a [`FluxMatrix`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FluxTag {
    ABar,
    BBar,
    CBar,
    ATilde,
    BTilde,
    CTilde,
}

/// A tagged 5×5 real flux matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxMatrix<T> {
    pub tag: FluxTag,
    pub m: Mat5<T>,
}

/// Cartesian flux matrix along axis `axis` (0 = x, 1 = y, 2 = z) for a
/// nondimensional flow: velocity on the diagonal and unit couplings between
/// density/pressure and the matching velocity component.
fn cartesian_axis<T: Real>(flow: &MeanFlow<T>, axis: usize) -> Mat5<T> {
    let vel = flow.velocity()[axis];
    let mut a = zeros5();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = vel;
    }
    let c = axis + 1;
    a[0][c] = T::one();
    a[c][4] = T::one();
    a[4][c] = T::one();
    a
}

/// Builds Ā, B̄, C̄ for a nondimensional mean flow.
pub fn build_cartesian<T: Real>(flow: &MeanFlow<T>) -> Result<[FluxMatrix<T>; 3]> {
    flow.validate()?;
    if !flow.is_nondimensional() {
        return Err(Error::DimensionalModeUnsupported);
    }
    Ok([
        FluxMatrix { tag: FluxTag::ABar, m: cartesian_axis(flow, 0) },
        FluxMatrix { tag: FluxTag::BBar, m: cartesian_axis(flow, 1) },
        FluxMatrix { tag: FluxTag::CBar, m: cartesian_axis(flow, 2) },
    ])
}

/// Closed form of the curvilinear flux matrix for the coordinate whose
/// gradient is `g` and whose contravariant velocity is `vel`.
fn curvilinear_closed<T: Real>(g: [T; 3], vel: T) -> Mat5<T> {
    let z = T::zero();
    [
        [vel, g[0], g[1], g[2], z],
        [z, vel, z, z, g[0]],
        [z, z, vel, z, g[1]],
        [z, z, z, vel, g[2]],
        [z, g[0], g[1], g[2], vel],
    ]
}

fn combine<T: Real>(g: [T; 3], bars: &[FluxMatrix<T>; 3]) -> Mat5<T> {
    let mut out = zeros5();
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = g[0] * bars[0].m[i][j] + g[1] * bars[1].m[i][j] + g[2] * bars[2].m[i][j];
        }
    }
    out
}

/// Builds Ã, B̃, C̃. Each matrix is computed twice, from the closed form and
/// as the metric-weighted combination of Ā, B̄, C̄; the two must agree.
pub fn build_curvilinear<T: Real>(m: &Metric<T>, flow: &MeanFlow<T>) -> Result<[FluxMatrix<T>; 3]> {
    m.validate()?;
    let bars = build_cartesian(flow)?;
    let cf = contravariant(m, flow);
    let grads = [m.xi(), m.eta(), m.zeta()];
    let vels = [cf.u_bar, cf.v_bar, cf.w_bar];
    let tags = [FluxTag::ATilde, FluxTag::BTilde, FluxTag::CTilde];
    let mut out = [FluxMatrix { tag: FluxTag::ATilde, m: zeros5() }; 3];
    for a in 0..3 {
        let closed = curvilinear_closed(grads[a], vels[a]);
        let combo = combine(grads[a], &bars);
        let scale = max_abs(&closed).max(T::one());
        let dev = max_abs_diff(&closed, &combo);
        if dev > T::lit(1e-14).max(T::epsilon() * T::lit(16.0)) * scale {
            return Err(Error::InternalInconsistency { context: format!("{:?}", tags[a]), deviation: dev.as_f64() });
        }
        out[a] = FluxMatrix { tag: tags[a], m: closed };
    }
    Ok(out)
}

/// Fourier wave vector (k, l, m) and frequency ω of the ansatz
/// `Q̂ exp(i(kξ + lη + mζ − ωt))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveVector<T> {
    pub k: Cx<T>,
    pub l: Cx<T>,
    pub m: Cx<T>,
    pub omega: Cx<T>,
}

impl<T: Real> WaveVector<T> {
    /// Wave vector with real components.
    pub fn real(k: T, l: T, m: T, omega: T) -> Self {
        Self { k: cx(k), l: cx(l), m: cx(m), omega: cx(omega) }
    }
}

/// The matrix −ωI + kÃ + lB̃ + mC̃ with its scalar parameters β and α.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionMatrix<T> {
    pub m: Mat5<Cx<T>>,
    pub beta: Cx<T>,
    pub alpha: [Cx<T>; 3],
}

/// Assembles the dispersion matrix and its parameters
/// β = Ūk + V̄l + W̄m − ω and α_a = ξ_a k + η_a l + ζ_a m.
pub fn dispersion_matrix<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    wave: &WaveVector<T>,
) -> Result<DispersionMatrix<T>> {
    let [a, b, c] = build_curvilinear(metric, flow)?;
    let mut d = [[cx(T::zero()); 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            d[i][j] = wave.k * a.m[i][j] + wave.l * b.m[i][j] + wave.m * c.m[i][j];
        }
        d[i][i] -= wave.omega;
    }
    let cf = contravariant(metric, flow);
    let beta = wave.k * cf.u_bar + wave.l * cf.v_bar + wave.m * cf.w_bar - wave.omega;
    let (xi, eta, zeta) = (metric.xi(), metric.eta(), metric.zeta());
    let alpha = [0, 1, 2].map(|q| wave.k * xi[q] + wave.l * eta[q] + wave.m * zeta[q]);
    Ok(DispersionMatrix { m: d, beta, alpha })
}

/// Factored determinant β³(β² − α₁² − α₂² − α₃²), equal to det of the
/// dispersion matrix.
pub fn dispersion_determinant<T: Real>(d: &DispersionMatrix<T>) -> Cx<T> {
    let b = d.beta;
    let a2 = d.alpha[0] * d.alpha[0] + d.alpha[1] * d.alpha[1] + d.alpha[2] * d.alpha[2];
    b * b * b * (b * b - a2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_flow_cartesian_pattern() {
        let [a, b, c] = build_cartesian(&MeanFlow::<f64>::nondimensional(0.0, 0.0, 0.0)).unwrap();
        let nz = |m: &Mat5<f64>| m.iter().flatten().filter(|v| **v != 0.0).count();
        assert_eq!(nz(&a.m), 3);
        assert_eq!((a.m[0][1], a.m[1][4], a.m[4][1]), (1.0, 1.0, 1.0));
        assert_eq!((b.m[0][2], b.m[2][4], b.m[4][2]), (1.0, 1.0, 1.0));
        assert_eq!((c.m[0][3], c.m[3][4], c.m[4][3]), (1.0, 1.0, 1.0));
    }

    #[test]
    fn half_speed_diagonal_has_eight_nonzeros() {
        let [a, _, _] = build_cartesian(&MeanFlow::<f64>::nondimensional(0.5, 0.0, 0.0)).unwrap();
        for i in 0..5 {
            assert_eq!(a.m[i][i], 0.5);
        }
        assert_eq!(a.m.iter().flatten().filter(|v| **v != 0.0).count(), 8);
    }

    #[test]
    fn dimensional_flow_rejected() {
        let f = MeanFlow::dimensional(1.2, 10.0, 0.0, 0.0, 1e5, 340.0).unwrap();
        assert_eq!(build_cartesian(&f).unwrap_err(), Error::DimensionalModeUnsupported);
    }

    #[test]
    fn hand_evaluated_entries() {
        let m = Metric::new([3.0, 4.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let [a, _, _] = build_curvilinear(&m, &MeanFlow::nondimensional(1.0, 2.0, 0.0)).unwrap();
        assert_eq!((a.m[0][0], a.m[0][1], a.m[0][2]), (11.0, 3.0, 4.0));
    }

    #[test]
    fn cartesian_metric_reduces() {
        let f = MeanFlow::nondimensional(0.3, -0.2, 0.1);
        let bars = build_cartesian(&f).unwrap();
        let tildes = build_curvilinear(&Metric::cartesian(), &f).unwrap();
        for a in 0..3 {
            assert_eq!(bars[a].m, tildes[a].m);
        }
    }

    #[test]
    fn dispersion_examples() {
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        let z = dispersion_matrix(&Metric::cartesian(), &f, &WaveVector::real(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(z.m.iter().flatten().all(|v| *v == cx(0.0)));
        let d = dispersion_matrix(&Metric::cartesian(), &f, &WaveVector::real(1.0, 0.0, 0.0, 0.5)).unwrap();
        assert_eq!(d.beta, cx(0.0));
        assert_eq!(d.alpha, [cx(1.0), cx(0.0), cx(0.0)]);
    }

    #[test]
    fn factored_determinant_small_cases() {
        let mk = |beta: f64, a1: f64| DispersionMatrix {
            m: [[cx(0.0); 5]; 5],
            beta: cx(beta),
            alpha: [cx(a1), cx(0.0), cx(0.0)],
        };
        assert_eq!(dispersion_determinant(&mk(1.0, 0.0)), cx(1.0));
        assert_eq!(dispersion_determinant(&mk(1.0, 1.0)), cx(0.0));
    }
}
