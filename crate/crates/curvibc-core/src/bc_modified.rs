//! Modified inflow conditions with fourth-order reflection: the m₁/m₂
//! coefficients, the reflection-expansion coefficients A₁/A₂/A₃, the
//! modified v̄₄ᴸ row and the corrected boundary operator.
//!
//! Only the fourth inflow row changes. Outflow operators are always the
//! quasi-3D ones.

use crate::bc_first_order::Side;
use crate::bc_quasi3d::{assemble, BcOperator, BcOptions, RowFourCorrection, Variant};
use crate::dispersion::{preflight, LambdaPair};
use crate::eigenvectors::Branch;
use crate::error::{Error, Result};
use crate::metrics::{compute_norms, MeanFlow, Metric};
use crate::scalar::{Cx, Real, Vec5};
use crate::wellposedness::{critical_matrix_confluent, critical_matrix_from_rows, truncated_v_left, CriticalMatrix};
use serde::{Deserialize, Serialize};

/// Off-diagonal magnitude (relative to the metric scale) below which a
/// metric is treated as axis aligned by the limit-form path.
pub const AXIS_ALIGNED_TOL: f64 = 1e-10;

/// Modification coefficients and the resulting reflection-expansion
/// coefficients of v̄₄ᴸ·u₅ᴿ ∝ A₁λ₁² + A₂λ₁λ₂ + A₃λ₂².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModCoefficients<T> {
    pub m1: T,
    pub m2: T,
    pub a1: T,
    pub a2: T,
    pub a3: T,
    /// True when the axis-aligned limit form supplied the denominators.
    pub limit_form: bool,
}

/// Reflection-expansion coefficients (A₁, A₂, A₃) for given m₁, m₂.
pub fn reflection_coefficients<T: Real>(metric: &Metric<T>, u_bar: T, m1: T, m2: T) -> [T; 3] {
    let (x, e, z) = (metric.xi(), metric.eta(), metric.zeta());
    let n = compute_norms(metric);
    let half = T::lit(0.5) * (u_bar + n.norm_xi);
    [
        -half * n.norm_eta * n.norm_eta + m1 * (x[1] * e[0] - x[0] * e[1]),
        m1 * (x[1] * z[0] - x[0] * z[1]) + m2 * (x[2] * e[0] - x[0] * e[2]),
        -half * n.norm_zeta * n.norm_zeta + m2 * (x[2] * z[0] - x[0] * z[2]),
    ]
}

fn axis_aligned<T: Real>(metric: &Metric<T>) -> bool {
    let r = metric.rows();
    let tol = T::lit(AXIS_ALIGNED_TOL) * metric.scale();
    (0..3).all(|i| (0..3).all(|j| i == j || r[i][j].abs() <= tol))
}

/// Computes m₁ and m₂ so that A₁ = A₃ = 0, then evaluates A₁, A₂, A₃.
///
/// Axis-aligned metrics (off-diagonals within [`AXIS_ALIGNED_TOL`] of the
/// scale) use the limit form with denominators −ξₓη_y and −ξₓζ_z. Any other
/// metric whose denominator vanishes yields `DegenerateDenominator`.
pub fn compute_m<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<ModCoefficients<T>> {
    let nd = flow.to_nondimensional();
    let (cf, n) = preflight(metric, &nd)?;
    let (x, e, z) = (metric.xi(), metric.eta(), metric.zeta());
    let half = T::lit(0.5) * (cf.u_bar + n.norm_xi);
    let limit_form = axis_aligned(metric);
    let (d1, d2) =
        if limit_form { (-x[0] * e[1], -x[0] * z[2]) } else { (x[1] * e[0] - x[0] * e[1], x[2] * z[0] - x[0] * z[2]) };
    let s = metric.scale();
    let tol = T::lit(AXIS_ALIGNED_TOL) * s * s;
    if d1.abs() <= tol {
        return Err(Error::DegenerateDenominator("xi_y*eta_x - xi_x*eta_y"));
    }
    if d2.abs() <= tol {
        return Err(Error::DegenerateDenominator("xi_z*zeta_x - xi_x*zeta_z"));
    }
    let m1 = half * n.norm_eta * n.norm_eta / d1;
    let m2 = half * n.norm_zeta * n.norm_zeta / d2;
    let [a1, a2, a3] = if limit_form {
        let a2 = m1 * (x[1] * z[0] - x[0] * z[1]) + m2 * (x[2] * e[0] - x[0] * e[2]);
        [T::zero(), a2, T::zero()]
    } else {
        reflection_coefficients(metric, cf.u_bar, m1, m2)
    };
    let amax = half * (n.norm_eta * n.norm_eta + n.norm_zeta * n.norm_zeta);
    if !limit_form && (a1.abs() > T::check_tol() * amax || a3.abs() > T::check_tol() * amax) {
        return Err(Error::InternalInconsistency {
            context: "A1/A3 cancellation".into(),
            deviation: a1.abs().max(a3.abs()).as_f64(),
        });
    }
    Ok(ModCoefficients { m1, m2, a1, a2, a3, limit_form })
}

/// Modified truncated row v̄₄ᴸ(λ) = v̄₄ᴸ(λ)_quasi3d + λ₁m₁(0, −ξ_y, ξₓ, 0, 0)
/// + λ₂m₂(0, −ξ_z, 0, ξₓ, 0), nondimensional.
pub fn modified_v4<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Result<Vec5<Cx<T>>> {
    let c = compute_m(metric, flow)?;
    let nd = flow.to_nondimensional();
    let mut row = truncated_v_left(4, metric, &nd, lp)?;
    let x = metric.xi();
    let a = lp.lambda1 * c.m1;
    let b = lp.lambda2 * c.m2;
    row[1] = row[1] - a * x[1] - b * x[2];
    row[2] += a * x[0];
    row[3] += b * x[0];
    Ok(row)
}

/// Inflow operator with the modified fourth row. `Side::Outflow` returns
/// the quasi-3D outflow operator unchanged.
pub fn build_modified<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    side: Side,
    opts: BcOptions,
) -> Result<BcOperator<T>> {
    match side {
        Side::Outflow => assemble(metric, flow, side, opts, Variant::Quasi3d, None),
        Side::Inflow => {
            let c = compute_m(metric, flow)?;
            assemble(metric, flow, side, opts, Variant::Modified, Some(RowFourCorrection { m1: c.m1, m2: c.m2 }))
        }
    }
}

/// The four truncated inflow rows with the modified fourth row.
pub fn modified_inflow_rows<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
) -> Result<[Vec5<Cx<T>>; 4]> {
    Ok([
        truncated_v_left(1, metric, flow, lp)?,
        truncated_v_left(2, metric, flow, lp)?,
        truncated_v_left(3, metric, flow, lp)?,
        modified_v4(metric, flow, lp)?,
    ])
}

/// Inflow critical matrix of the modified conditions.
pub fn critical_matrix_modified<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<CriticalMatrix<T>> {
    let rows = modified_inflow_rows(metric, flow, lp)?;
    critical_matrix_from_rows(&rows, metric, flow, lp, branch)
}

/// Numeric ranks of the inflow critical matrices on the ill-posed locus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusRanks<T> {
    pub omega: Cx<T>,
    /// Quasi-3D rows against u₁ᴿ..u₄ᴿ.
    pub quasi3d: usize,
    /// Modified rows against u₁ᴿ..u₄ᴿ. At most 3 on the locus because u₄ᴿ
    /// falls into span{u₂ᴿ, u₃ᴿ} when k₄ = k₃.
    pub modified: usize,
    /// Quasi-3D rows against the confluent basis (u₄ᴿ replaced by the
    /// generalized eigenvector).
    pub quasi3d_confluent: usize,
    /// Modified rows against the confluent basis.
    pub modified_confluent: usize,
    /// Smallest singular value of the modified confluent matrix relative to
    /// the largest.
    pub modified_confluent_sigma_min: T,
    /// Relative residual of the generalized eigenvector system.
    pub jordan_residual: T,
}

/// Evaluates the quasi-3D and modified inflow critical matrices at the
/// ill-posed locus ω for wavenumbers (l, m), in both the eigenvector basis
/// and the confluent basis. Requires an orthogonal grid and the moving
/// frame; (l, m) = (0, 0) has no locus and yields `InvalidArgument`.
pub fn locus_ranks<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, l: T, m: T) -> Result<LocusRanks<T>> {
    let nd = flow.to_nondimensional();
    let finding = crate::wellposedness::detect_illposed_inflow(metric, &nd, l, m)?;
    let (omega, lp) = match (finding.omega, finding.lambda) {
        (Some(w), Some(lp)) => (w, lp),
        _ => return Err(Error::InvalidArgument("l = m = 0 has no ill-posed locus".into())),
    };
    let br = Branch::Frequency(omega);
    let rq = [
        truncated_v_left(1, metric, &nd, &lp)?,
        truncated_v_left(2, metric, &nd, &lp)?,
        truncated_v_left(3, metric, &nd, &lp)?,
        truncated_v_left(4, metric, &nd, &lp)?,
    ];
    let rm = modified_inflow_rows(metric, &nd, &lp)?;
    let lit_m = critical_matrix_from_rows(&rm, metric, &nd, &lp, br)?;
    let (conf_q, _) = critical_matrix_confluent(&rq, metric, &nd, &lp, br)?;
    let (conf_m, res) = critical_matrix_confluent(&rm, metric, &nd, &lp, br)?;
    let sv = conf_m.singular_values();
    let smin = match (sv.first(), sv.last()) {
        (Some(&a), Some(&b)) if a > T::zero() => b / a,
        _ => T::zero(),
    };
    Ok(LocusRanks {
        omega,
        quasi3d: finding.rank,
        modified: lit_m.rank(),
        quasi3d_confluent: conf_q.rank(),
        modified_confluent: conf_m.rank(),
        modified_confluent_sigma_min: smin,
        jordan_residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn unit_flow(u: f64) -> MeanFlow<f64> {
        MeanFlow::nondimensional(u, 0.0, 0.0)
    }

    #[test]
    fn cartesian_limit_form() {
        let c = compute_m(&Metric::<f64>::cartesian(), &unit_flow(0.5)).unwrap();
        assert!(c.limit_form);
        assert_eq!(c.m1, -0.75);
        assert_eq!(c.m2, -0.75);
        assert_eq!((c.a1, c.a2, c.a3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn sheared_eta_value() {
        let m = Metric::<f64>::new([1.0, 0.0, 0.0], [0.1, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let c = compute_m(&m, &unit_flow(0.5)).unwrap();
        assert!(!c.limit_form);
        assert!((c.m1 + 0.7575).abs() < 1e-15);
        assert!(c.a1.abs() < 1e-14 && c.a3.abs() < 1e-14);
    }

    #[test]
    fn degenerate_denominator() {
        let m = Metric::<f64>::new([1.0, 0.5, 0.0], [2.0, 1.0, 0.3], [0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(compute_m(&m, &unit_flow(0.3)), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn cartesian_row_four_entry() {
        let m = Metric::<f64>::cartesian();
        let lp = LambdaPair::new(cx(0.1), cx(0.0));
        let row = modified_v4(&m, &unit_flow(0.5), &lp).unwrap();
        assert!((row[2] - cx(0.1 * 0.5 + 0.1 * -0.75)).norm() < 1e-15);
        let r0 = modified_v4(&m, &unit_flow(0.5), &LambdaPair::zero()).unwrap();
        let q0 = truncated_v_left(4, &m, &unit_flow(0.5), &LambdaPair::zero()).unwrap();
        assert_eq!(r0, q0);
    }

    #[test]
    fn locus_ranks_cartesian() {
        let r = locus_ranks(&Metric::<f64>::cartesian(), &unit_flow(0.5), 0.7, 0.4).unwrap();
        assert_eq!(r.quasi3d, 2);
        assert_eq!(r.modified, 3);
        assert_eq!(r.quasi3d_confluent, 3);
        assert_eq!(r.modified_confluent, 4);
        assert!(r.jordan_residual < 1e-12);
    }
}
