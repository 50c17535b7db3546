//! Grid-metric algebra: the nine metric components at a point, their norms
//! and inner products, mean-flow state, and contravariant velocities.
//!
//! Submodules provide analytic coordinate mappings ([`mapping`]) and
//! structured-grid file ingestion ([`grid_file`]).

pub mod grid_file;
pub mod mapping;

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// The nine derivatives of the curvilinear coordinates with respect to the
/// Cartesian ones at a single grid point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric<T> {
    pub xi_x: T,
    pub xi_y: T,
    pub xi_z: T,
    pub eta_x: T,
    pub eta_y: T,
    pub eta_z: T,
    pub zeta_x: T,
    pub zeta_y: T,
    pub zeta_z: T,
}

impl<T: Real> Metric<T> {
    /// Builds a validated metric from its three rows (ξ, η, ζ gradients).
    pub fn new(xi: [T; 3], eta: [T; 3], zeta: [T; 3]) -> Result<Self> {
        let m = Self::from_rows_unchecked([xi, eta, zeta]);
        m.validate()?;
        Ok(m)
    }

    /// Builds a metric from rows without validation.
    pub fn from_rows_unchecked(r: [[T; 3]; 3]) -> Self {
        Self {
            xi_x: r[0][0],
            xi_y: r[0][1],
            xi_z: r[0][2],
            eta_x: r[1][0],
            eta_y: r[1][1],
            eta_z: r[1][2],
            zeta_x: r[2][0],
            zeta_y: r[2][1],
            zeta_z: r[2][2],
        }
    }

    /// The identity metric of a Cartesian grid.
    pub fn cartesian() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self::from_rows_unchecked([[o, z, z], [z, o, z], [z, z, o]])
    }

    /// Rows of the metric matrix: ∇ξ, ∇η, ∇ζ.
    pub fn rows(&self) -> [[T; 3]; 3] {
        [self.xi(), self.eta(), self.zeta()]
    }

    /// Gradient of ξ.
    pub fn xi(&self) -> [T; 3] {
        [self.xi_x, self.xi_y, self.xi_z]
    }

    /// Gradient of η.
    pub fn eta(&self) -> [T; 3] {
        [self.eta_x, self.eta_y, self.eta_z]
    }

    /// Gradient of ζ.
    pub fn zeta(&self) -> [T; 3] {
        [self.zeta_x, self.zeta_y, self.zeta_z]
    }

    /// Determinant of the metric matrix.
    pub fn det(&self) -> T {
        det3(&self.rows())
    }

    /// Largest absolute component.
    pub fn scale(&self) -> T {
        self.rows().iter().flat_map(|r| r.iter()).fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Checks finiteness and nonsingularity (|det| > 1e-12 · scale³).
    pub fn validate(&self) -> Result<()> {
        if self.rows().iter().flat_map(|r| r.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteMetric);
        }
        let s = self.scale();
        let threshold = T::lit(1e-12) * s * s * s;
        let d = self.det();
        if !(d.abs() > threshold) || s == T::zero() {
            return Err(Error::SingularMetric { det: d.as_f64(), threshold: threshold.as_f64() });
        }
        Ok(())
    }

    /// Every component multiplied by `s`.
    pub fn scaled(&self, s: T) -> Self {
        let r = self.rows();
        Self::from_rows_unchecked(r.map(|row| row.map(|v| v * s)))
    }

    /// Converts a forward Jacobian `J[a][b] = ∂x_a/∂ξ_b` into the metric
    /// (its inverse).
    pub fn from_jacobian(jac: &[[T; 3]; 3]) -> Result<Self> {
        let inv = inverse3(jac).ok_or(Error::SingularMetric { det: det3(jac).as_f64(), threshold: 0.0 })?;
        let m = Self::from_rows_unchecked(inv);
        m.validate()?;
        Ok(m)
    }

    /// The forward Jacobian `∂x_a/∂ξ_b` (inverse of the metric matrix).
    pub fn to_jacobian(&self) -> Result<[[T; 3]; 3]> {
        self.validate()?;
        inverse3(&self.rows()).ok_or(Error::SingularMetric { det: self.det().as_f64(), threshold: 0.0 })
    }

    /// Converts the components to another scalar type.
    pub fn cast<U: Real>(&self) -> Metric<U> {
        Metric::from_rows_unchecked(self.rows().map(|r| r.map(|v| U::lit(v.as_f64()))))
    }
}

/// Norms, inner products and the partial norms Ψ₂, Ψ₃ of a metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricNorms<T> {
    pub norm_xi: T,
    pub norm_eta: T,
    pub norm_zeta: T,
    pub dot_xieta: T,
    pub dot_xizeta: T,
    pub dot_etazeta: T,
    pub psi2: T,
    pub psi3: T,
}

fn dot3<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn det3<T: Real>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn inverse3<T: Real>(m: &[[T; 3]; 3]) -> Option<[[T; 3]; 3]> {
    let d = det3(m);
    if d == T::zero() || !d.is_finite() {
        return None;
    }
    let c = |r0: usize, c0: usize, r1: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [c(1, 1, 2, 2), -c(0, 1, 2, 2), c(0, 1, 1, 2)],
        [-c(1, 0, 2, 2), c(0, 0, 2, 2), -c(0, 0, 1, 2)],
        [c(1, 0, 2, 1), -c(0, 0, 2, 1), c(0, 0, 1, 1)],
    ];
    Some(adj.map(|r| r.map(|v| v / d)))
}

/// Computes norms, inner products, Ψ₂ = √(ξx²+ξy²) and Ψ₃ = √(ξx²+ξz²).
pub fn compute_norms<T: Real>(m: &Metric<T>) -> MetricNorms<T> {
    let (xi, eta, zeta) = (m.xi(), m.eta(), m.zeta());
    MetricNorms {
        norm_xi: dot3(&xi, &xi).sqrt(),
        norm_eta: dot3(&eta, &eta).sqrt(),
        norm_zeta: dot3(&zeta, &zeta).sqrt(),
        dot_xieta: dot3(&xi, &eta),
        dot_xizeta: dot3(&xi, &zeta),
        dot_etazeta: dot3(&eta, &zeta),
        psi2: (m.xi_x * m.xi_x + m.xi_y * m.xi_y).sqrt(),
        psi3: (m.xi_x * m.xi_x + m.xi_z * m.xi_z).sqrt(),
    }
}

/// Orthogonal-grid predicate: all three inner products vanish within
/// `1e-12 ·` the product of the corresponding norms.
pub fn is_orthogonal<T: Real>(m: &Metric<T>) -> bool {
    let n = compute_norms(m);
    let tol = T::check_tol();
    n.dot_xieta.abs() <= tol * n.norm_xi * n.norm_eta
        && n.dot_xizeta.abs() <= tol * n.norm_xi * n.norm_zeta
        && n.dot_etazeta.abs() <= tol * n.norm_eta * n.norm_zeta
}

/// Local mean state about which the Euler equations are linearized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanFlow<T> {
    pub rho_bar: T,
    pub u_bar: T,
    pub v_bar: T,
    pub w_bar: T,
    pub p_bar: T,
    pub c_bar: T,
}

/// Ratio of specific heats used to fill p̄ in nondimensional flows.
pub const GAMMA: f64 = 1.4;

impl<T: Real> MeanFlow<T> {
    /// Nondimensional flow (ρ̄ = c̄ = 1, p̄ = 1/γ) with the given velocity.
    pub fn nondimensional(u: T, v: T, w: T) -> Self {
        Self { rho_bar: T::one(), u_bar: u, v_bar: v, w_bar: w, p_bar: T::one() / T::lit(GAMMA), c_bar: T::one() }
    }

    /// Dimensional flow; validated for positivity and finiteness.
    pub fn dimensional(rho: T, u: T, v: T, w: T, p: T, c: T) -> Result<Self> {
        let f = Self { rho_bar: rho, u_bar: u, v_bar: v, w_bar: w, p_bar: p, c_bar: c };
        f.validate()?;
        Ok(f)
    }

    /// Checks ρ̄ > 0, p̄ > 0, c̄ > 0 and finiteness.
    pub fn validate(&self) -> Result<()> {
        let all = [self.rho_bar, self.u_bar, self.v_bar, self.w_bar, self.p_bar, self.c_bar];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFlow("non-finite component".into()));
        }
        if !(self.rho_bar > T::zero()) {
            return Err(Error::InvalidFlow("rho_bar must be positive".into()));
        }
        if !(self.p_bar > T::zero()) {
            return Err(Error::InvalidFlow("p_bar must be positive".into()));
        }
        if !(self.c_bar > T::zero()) {
            return Err(Error::InvalidFlow("c_bar must be positive".into()));
        }
        Ok(())
    }

    /// True when ρ̄ = c̄ = 1 exactly.
    pub fn is_nondimensional(&self) -> bool {
        self.rho_bar == T::one() && self.c_bar == T::one()
    }

    /// Velocity components as an array.
    pub fn velocity(&self) -> [T; 3] {
        [self.u_bar, self.v_bar, self.w_bar]
    }

    /// The same state scaled by ρ̄ and c̄ (velocities divided by c̄,
    /// pressure by ρ̄c̄²).
    pub fn to_nondimensional(&self) -> Self {
        Self {
            rho_bar: T::one(),
            u_bar: self.u_bar / self.c_bar,
            v_bar: self.v_bar / self.c_bar,
            w_bar: self.w_bar / self.c_bar,
            p_bar: self.p_bar / (self.rho_bar * self.c_bar * self.c_bar),
            c_bar: T::one(),
        }
    }

    /// Returns a copy with the velocity replaced.
    pub fn with_velocity(&self, vel: [T; 3]) -> Self {
        Self { u_bar: vel[0], v_bar: vel[1], w_bar: vel[2], ..*self }
    }
}

/// Mean velocity projected on the three coordinate gradients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContravariantFlow<T> {
    pub u_bar: T,
    pub v_bar: T,
    pub w_bar: T,
}

/// Contravariant velocities Ū = ∇ξ·ū, V̄ = ∇η·ū, W̄ = ∇ζ·ū.
pub fn contravariant<T: Real>(m: &Metric<T>, flow: &MeanFlow<T>) -> ContravariantFlow<T> {
    let u = flow.velocity();
    ContravariantFlow { u_bar: dot3(&m.xi(), &u), v_bar: dot3(&m.eta(), &u), w_bar: dot3(&m.zeta(), &u) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_norms() {
        let n = compute_norms(&Metric::<f64>::cartesian());
        assert_eq!((n.norm_xi, n.norm_eta, n.norm_zeta), (1.0, 1.0, 1.0));
        assert_eq!((n.dot_xieta, n.dot_xizeta, n.dot_etazeta), (0.0, 0.0, 0.0));
        assert_eq!((n.psi2, n.psi3), (1.0, 1.0));
    }

    #[test]
    fn three_four_five() {
        let m = Metric::new([3.0, 4.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let n = compute_norms(&m);
        assert_eq!(n.norm_xi, 5.0);
        assert_eq!(n.psi2, 5.0);
        assert_eq!(n.psi3, 3.0);
        assert_eq!(n.dot_xieta, 0.0);
        assert_eq!(n.dot_xizeta, 3.0);
    }

    #[test]
    fn contravariant_identity_and_zero() {
        let f = MeanFlow::nondimensional(0.5, 0.1, 0.2);
        let c = contravariant(&Metric::<f64>::cartesian(), &f);
        assert_eq!((c.u_bar, c.v_bar, c.w_bar), (0.5, 0.1, 0.2));
        let m = Metric::new([3.0, 4.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let z = contravariant(&m, &MeanFlow::nondimensional(0.0, 0.0, 0.0));
        assert_eq!((z.u_bar, z.v_bar, z.w_bar), (0.0, 0.0, 0.0));
    }

    #[test]
    fn singular_metric_rejected() {
        let e = Metric::new([1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap_err();
        assert_eq!(e.name(), "SingularMetric");
        let e = Metric::new([f64::NAN, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap_err();
        assert_eq!(e, Error::NonFiniteMetric);
    }

    #[test]
    fn jacobian_round_trip() {
        let m = Metric::<f64>::new([1.0, 0.2, 0.1], [0.0, 1.5, 0.3], [0.1, 0.0, 0.8]).unwrap();
        let j = m.to_jacobian().unwrap();
        let back = Metric::from_jacobian(&j).unwrap();
        for (a, b) in m.rows().iter().flatten().zip(back.rows().iter().flatten()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn flow_validation() {
        assert!(MeanFlow::dimensional(1.2, 100.0, 0.0, 0.0, 1e5, 340.0).is_ok());
        assert!(MeanFlow::dimensional(-1.0, 0.0, 0.0, 0.0, 1.0, 1.0).is_err());
        let nd = MeanFlow::<f64>::dimensional(2.0, 170.0, 0.0, 0.0, 1e5, 340.0).unwrap().to_nondimensional();
        assert!(nd.is_nondimensional());
        assert!((nd.u_bar - 0.5).abs() < 1e-15);
    }
}
