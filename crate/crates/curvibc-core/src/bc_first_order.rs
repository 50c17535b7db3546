//! One-dimensional characteristic transforms and first-order nonreflecting
//! inflow/outflow conditions.
//!
//! The forward transform has the λ → 0 left eigenvectors wₙᴸ as rows; the
//! reconstruction has the right eigenvectors wₙᴿ as columns. For general
//! metrics with ξ_yξ_z ≠ 0 the two are not exact inverses of each other, so
//! a second reconstruction mode using the numeric inverse is provided.

use crate::dispersion::preflight;
use crate::error::{Error, Result};
use crate::linalg::{identity5, invert5, mat_mul, mat_vec, max_abs_diff};
use crate::metrics::{MeanFlow, Metric};
use crate::scalar::{Mat5, Real, Vec5};
use serde::{Deserialize, Serialize};

/// Primitive perturbation (ρ′, u′, v′, w′, p′).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Perturbation<T> {
    pub rho_p: T,
    pub u_p: T,
    pub v_p: T,
    pub w_p: T,
    pub p_p: T,
}

impl<T: Real> Perturbation<T> {
    /// Builds a perturbation from an array in primitive order.
    pub fn from_array(a: Vec5<T>) -> Self {
        Self { rho_p: a[0], u_p: a[1], v_p: a[2], w_p: a[3], p_p: a[4] }
    }

    /// Components in primitive order.
    pub fn to_array(&self) -> Vec5<T> {
        [self.rho_p, self.u_p, self.v_p, self.w_p, self.p_p]
    }
}

/// Characteristic wave amplitudes c₁…c₅.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicState<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub c4: T,
    pub c5: T,
}

impl<T: Real> CharacteristicState<T> {
    /// Builds a state from an array ordered c₁…c₅.
    pub fn from_array(a: Vec5<T>) -> Self {
        Self { c1: a[0], c2: a[1], c3: a[2], c4: a[3], c5: a[4] }
    }

    /// Amplitudes ordered c₁…c₅.
    pub fn to_array(&self) -> Vec5<T> {
        [self.c1, self.c2, self.c3, self.c4, self.c5]
    }
}

/// Variable scaling of the transform.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    /// Variables scaled by mean density and speed of sound (ρ̄ = c̄ = 1).
    #[default]
    Nondimensional,
    /// Dimensional variables with explicit ρ̄c̄ and c̄² factors.
    Dimensional,
}

/// How characteristic amplitudes are mapped back to primitive variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    /// Columns are the closed-form right vectors wₙᴿ.
    #[default]
    Tabulated,
    /// Numeric inverse of the forward transform.
    ExactInverse,
}

/// Boundary face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// ξ = 0 face, where waves 1–4 enter for subsonic flow.
    Inflow,
    /// ξ = 1 face, where wave 5 enters for subsonic flow.
    Outflow,
}

/// Forward and backward characteristic transforms at one boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharTransform<T> {
    pub to_char: Mat5<T>,
    pub from_char: Mat5<T>,
    pub mode: ScalingMode,
    pub reconstruction: Reconstruction,
}

/// Forward transform rows and closed-form reconstruction columns.
fn closed_forms<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, mode: ScalingMode) -> Result<(Mat5<T>, Mat5<T>)> {
    metric.validate()?;
    flow.validate()?;
    let n = crate::metrics::compute_norms(metric);
    let tol = T::check_tol() * n.norm_xi;
    if n.psi2 <= tol {
        return Err(Error::DegenerateNormalization("psi2"));
    }
    if n.psi3 <= tol {
        return Err(Error::DegenerateNormalization("psi3"));
    }
    let (rc, c2) = match mode {
        ScalingMode::Nondimensional => (T::one(), T::one()),
        ScalingMode::Dimensional => (flow.rho_bar * flow.c_bar, flow.c_bar * flow.c_bar),
    };
    let x = metric.xi();
    let nx = n.norm_xi;
    let z = T::zero();
    let two = T::lit(2.0);
    let to = [
        [-c2 * nx, z, z, z, nx],
        [z, -rc * x[1], rc * x[0], z, z],
        [z, -rc * x[2], z, rc * x[0], z],
        [z, rc * x[0], rc * x[1], rc * x[2], nx],
        [z, -rc * x[0], -rc * x[1], -rc * x[2], nx],
    ];
    let p2 = rc * n.psi2 * n.psi2;
    let p3 = rc * n.psi3 * n.psi3;
    let a = T::one() / (two * c2 * nx);
    let b = T::one() / (two * rc * nx * nx);
    let h = T::one() / (two * nx);
    let from = [
        [-T::one() / (c2 * nx), z, z, a, a],
        [z, -x[1] / p2, -x[2] / p3, x[0] * b, -x[0] * b],
        [z, x[0] / p2, z, x[1] * b, -x[1] * b],
        [z, z, x[0] / p3, x[2] * b, -x[2] * b],
        [z, z, z, h, h],
    ];
    Ok((to, from))
}

/// Builds the transform with the closed-form reconstruction.
pub fn build_transform<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, mode: ScalingMode) -> Result<CharTransform<T>> {
    build_transform_with(metric, flow, mode, Reconstruction::Tabulated)
}

/// Builds the transform with an explicit reconstruction mode.
pub fn build_transform_with<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    mode: ScalingMode,
    reconstruction: Reconstruction,
) -> Result<CharTransform<T>> {
    let (to_char, closed) = closed_forms(metric, flow, mode)?;
    let from_char = match reconstruction {
        Reconstruction::Tabulated => closed,
        Reconstruction::ExactInverse => invert5(&to_char).ok_or(Error::DegenerateNormalization("to_char"))?,
    };
    Ok(CharTransform { to_char, from_char, mode, reconstruction })
}

impl<T: Real> CharTransform<T> {
    /// Largest entry of |from_char · to_char − I|.
    pub fn inverse_deviation(&self) -> T {
        max_abs_diff(&mat_mul(&self.from_char, &self.to_char), &identity5())
    }
}

/// Primitive → characteristic.
pub fn to_characteristics<T: Real>(t: &CharTransform<T>, q: &Perturbation<T>) -> CharacteristicState<T> {
    CharacteristicState::from_array(mat_vec(&t.to_char, &q.to_array()))
}

/// Characteristic → primitive.
pub fn from_characteristics<T: Real>(t: &CharTransform<T>, c: &CharacteristicState<T>) -> Perturbation<T> {
    Perturbation::from_array(mat_vec(&t.from_char, &c.to_array()))
}

/// Indices (0-based) of the characteristics that enter through `side` for
/// subsonic flow.
pub fn incoming_indices(side: Side) -> &'static [usize] {
    match side {
        Side::Inflow => &[0, 1, 2, 3],
        Side::Outflow => &[4],
    }
}

/// Zeroes the incoming characteristics at `side` and reconstructs.
pub fn apply_1d<T: Real>(t: &CharTransform<T>, q: &Perturbation<T>, side: Side) -> Perturbation<T> {
    let mut c = mat_vec(&t.to_char, &q.to_array());
    for &i in incoming_indices(side) {
        c[i] = T::zero();
    }
    Perturbation::from_array(mat_vec(&t.from_char, &c))
}

/// Inflow condition c₁ = c₂ = c₃ = c₄ = 0.
pub fn apply_inflow_1d<T: Real>(t: &CharTransform<T>, q: &Perturbation<T>) -> Perturbation<T> {
    apply_1d(t, q, Side::Inflow)
}

/// Outflow condition c₅ = 0.
pub fn apply_outflow_1d<T: Real>(t: &CharTransform<T>, q: &Perturbation<T>) -> Perturbation<T> {
    apply_1d(t, q, Side::Outflow)
}

/// Checks that the flow is subsonic in the boundary-normal direction, the
/// regime in which [`incoming_indices`] is valid.
pub fn require_subsonic<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<()> {
    let nd = flow.to_nondimensional();
    let (cf, n) = preflight(metric, &nd)?;
    if cf.u_bar <= T::zero() || cf.u_bar >= n.norm_xi {
        return Err(Error::NotSubsonic);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cart() -> CharTransform<f64> {
        build_transform(&Metric::cartesian(), &MeanFlow::nondimensional(0.5, 0.0, 0.0), ScalingMode::Nondimensional)
            .unwrap()
    }

    #[test]
    fn cartesian_tables_exact() {
        let t = cart();
        let to = [
            [-1.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 1.0],
            [0.0, -1.0, 0.0, 0.0, 1.0],
        ];
        let from = [
            [-1.0, 0.0, 0.0, 0.5, 0.5],
            [0.0, 0.0, 0.0, 0.5, -0.5],
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.5, 0.5],
        ];
        assert_eq!(t.to_char, to);
        assert_eq!(t.from_char, from);
        assert_eq!(mat_mul(&t.from_char, &t.to_char), identity5());
    }

    #[test]
    fn hand_evaluated_projections() {
        let t = cart();
        let q = Perturbation::from_array([0.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(to_characteristics(&t, &q).to_array(), [1.0, 0.0, 0.0, 2.0, 0.0]);
        assert_eq!(apply_outflow_1d(&t, &q), q);
        let q = Perturbation::from_array([0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(apply_outflow_1d(&t, &q).to_array(), [-0.5, 0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn dimensional_matches_nondimensional_at_unit_state() {
        let m = Metric::new([1.0, 0.2, 0.3], [0.0, 1.0, 0.1], [0.2, 0.0, 1.0]).unwrap();
        let f = MeanFlow::nondimensional(0.3, 0.0, 0.0);
        let a = build_transform(&m, &f, ScalingMode::Nondimensional).unwrap();
        let b = build_transform(&m, &f, ScalingMode::Dimensional).unwrap();
        assert_eq!(a.to_char, b.to_char);
        assert_eq!(a.from_char, b.from_char);
    }

    #[test]
    fn dimensional_cartesian_is_inverse() {
        let f = MeanFlow::dimensional(1.2, 30.0, 0.0, 0.0, 1e5, 340.0).unwrap();
        let t = build_transform(&Metric::cartesian(), &f, ScalingMode::Dimensional).unwrap();
        assert!(t.inverse_deviation() < 1e-14);
    }

    #[test]
    fn exact_inverse_mode() {
        let m = Metric::new([1.0, 0.2, 0.3], [0.0, 1.0, 0.1], [0.2, 0.0, 1.0]).unwrap();
        let f = MeanFlow::nondimensional(0.3, 0.0, 0.0);
        let tabulated = build_transform(&m, &f, ScalingMode::Nondimensional).unwrap();
        assert!(tabulated.inverse_deviation() > 1e-3);
        let exact = build_transform_with(&m, &f, ScalingMode::Nondimensional, Reconstruction::ExactInverse).unwrap();
        assert!(exact.inverse_deviation() < 1e-14);
    }
}
