//! Normal-mode well-posedness analysis of the quasi-3D conditions: the
//! inflow critical matrix, detection of ill-posed incoming modes on
//! orthogonal grids, a determinant scanner for general grids, and the
//! outflow critical scalar.
//!
//! The analysis is carried out in the frame moving with the tangential
//! contravariant velocities, so every entry point requires V̄ = W̄ = 0 (use
//! [`moving_frame`] first). The symbols Θ_ξ, Θ_η, Θ_ζ are read as the metric
//! norms |ξ|, |η|, |ζ|.

use crate::bc_quasi3d::taylor_v_left;
use crate::dispersion::{preflight, LambdaPair};
use crate::eigenvectors::{right_eigenvector_branch, Branch};
use crate::error::{Error, Result};
use crate::linalg::{cdet, csolve, numeric_rank, singular_values};
use crate::matrices::build_curvilinear;
use crate::metrics::{compute_norms, contravariant, inverse3, is_orthogonal, MeanFlow, Metric};
use crate::scalar::{cx, Cx, Real, Vec5};
use serde::{Deserialize, Serialize};

/// Singular-value threshold (relative to σ_max) for numeric rank.
pub const RANK_TOL: f64 = 1e-8;

/// Critical matrix (4×4 at inflow, 1×1 at outflow) with its context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalMatrix<T> {
    pub entries: Vec<Vec<Cx<T>>>,
    pub metric: Metric<T>,
    pub flow: MeanFlow<T>,
    pub lambda: LambdaPair<T>,
}

impl<T: Real> CriticalMatrix<T> {
    /// Determinant of the entries.
    pub fn det(&self) -> Cx<T> {
        cdet(&self.entries)
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<T> {
        singular_values(&self.entries)
    }

    /// Numeric rank with threshold [`RANK_TOL`] relative to σ_max.
    pub fn rank(&self) -> usize {
        numeric_rank(&self.entries, T::lit(RANK_TOL))
    }
}

/// Flow whose contravariant velocity is (Ū, 0, 0) for the same metric.
pub fn moving_frame<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<MeanFlow<T>> {
    metric.validate()?;
    let cf = contravariant(metric, flow);
    let inv = inverse3(&metric.rows()).ok_or(Error::SingularMetric { det: metric.det().as_f64(), threshold: 0.0 })?;
    let vel = [inv[0][0] * cf.u_bar, inv[1][0] * cf.u_bar, inv[2][0] * cf.u_bar];
    Ok(flow.with_velocity(vel))
}

fn require_frame<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<()> {
    let cf = contravariant(metric, flow);
    let n = compute_norms(metric);
    let tol = T::check_tol() * (cf.u_bar.abs() + n.norm_xi);
    if cf.v_bar.abs() > tol * n.norm_eta / n.norm_xi.max(T::min_positive_value()).max(T::one())
        || cf.w_bar.abs() > tol * n.norm_zeta / n.norm_xi.max(T::min_positive_value()).max(T::one())
    {
        return Err(Error::NotMovingFrame);
    }
    Ok(())
}

/// Truncated rows v̄ₙᴸ(λ) = vₙᴸ(0) + λ₁∂₁vₙᴸ + λ₂∂₂vₙᴸ.
pub fn truncated_v_left<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
) -> Result<Vec5<Cx<T>>> {
    let t = taylor_v_left(n, metric, flow)?;
    Ok(std::array::from_fn(|j| cx(t.v0[j]) + lp.lambda1 * t.d_lambda1[j] + lp.lambda2 * t.d_lambda2[j]))
}

fn dot<T: Real>(a: &Vec5<Cx<T>>, b: &Vec5<Cx<T>>) -> Cx<T> {
    a.iter().zip(b).fold(cx(T::zero()), |s, (x, y)| s + x * y)
}

/// γ_a = ξ_a + Ū(η_a λ₁ + ζ_a λ₂).
pub fn gammas<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> [Cx<T>; 3] {
    let u = contravariant(metric, flow).u_bar;
    let (x, e, z) = (metric.xi(), metric.eta(), metric.zeta());
    std::array::from_fn(|a| cx(x[a]) + (lp.lambda1 * e[a] + lp.lambda2 * z[a]) * u)
}

/// γ₁² + γ₂² + γ₃², which vanishes on the ill-posed locus of an orthogonal
/// grid.
pub fn gamma_sum<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Cx<T> {
    let g = gammas(metric, flow, lp);
    g[0] * g[0] + g[1] * g[1] + g[2] * g[2]
}

/// Critical matrix c_nj = rowsₙ · u_jᴿ for arbitrary inflow rows.
pub fn critical_matrix_from_rows<T: Real>(
    rows: &[Vec5<Cx<T>>; 4],
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<CriticalMatrix<T>> {
    let cols: Vec<Vec5<Cx<T>>> =
        (1..=4).map(|j| right_eigenvector_branch(j, metric, flow, lp, branch)).collect::<Result<_>>()?;
    let entries = rows.iter().map(|r| cols.iter().map(|c| dot(r, c)).collect()).collect();
    Ok(CriticalMatrix { entries, metric: *metric, flow: *flow, lambda: *lp })
}

/// Closed-form entries (c₂₂, c₂₃, c₃₂, c₃₃, c₄₄) of the inflow critical
/// matrix in the moving frame.
pub fn critical_closed_form<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    k4: Cx<T>,
) -> [Cx<T>; 5] {
    let n = compute_norms(metric);
    let u = contravariant(metric, flow).u_bar;
    let g = gammas(metric, flow, lp);
    let (l1, l2) = (lp.lambda1, lp.lambda2);
    let p2 = n.psi2 * n.psi2;
    let p3 = n.psi3 * n.psi3;
    let nx = n.norm_xi;
    let ld = l1 * n.dot_xieta + l2 * n.dot_xizeta;
    let bracket = k4 * (nx * nx)
        + l1 * l1 * (u * n.norm_eta * n.norm_eta)
        + l2 * l2 * (u * n.norm_zeta * n.norm_zeta)
        + ld
        + l1 * l2 * (T::lit(2.0) * u * n.dot_etazeta)
        + k4 * u * (ld - nx - ld * (u / nx))
        + nx
        + ld * (u / nx);
    [
        (g[1] * g[1] + g[0] * g[0]) / p2,
        g[1] * g[2] / p3,
        g[1] * g[2] / p2,
        (g[2] * g[2] + g[0] * g[0]) / p3,
        bracket * ((u + nx) / (T::lit(2.0) * nx * nx)),
    ]
}

/// Inflow critical matrix for the quasi-3D conditions at a λ pair, with the
/// acoustic branch chosen by `branch`. The direct products are cross-checked
/// against the closed forms.
pub fn critical_matrix_inflow_branch<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<CriticalMatrix<T>> {
    require_frame(metric, flow)?;
    let rows: [Vec5<Cx<T>>; 4] = [
        truncated_v_left(1, metric, flow, lp)?,
        truncated_v_left(2, metric, flow, lp)?,
        truncated_v_left(3, metric, flow, lp)?,
        truncated_v_left(4, metric, flow, lp)?,
    ];
    let cm = critical_matrix_from_rows(&rows, metric, flow, lp, branch)?;
    let k4 = crate::eigenvectors::mode_k_star(4, metric, flow, lp, branch)?;
    let cf = critical_closed_form(metric, flow, lp, k4);
    let zero = cx(T::zero());
    let one = cx(T::one());
    let expect =
        [[one, zero, zero, zero], [zero, cf[0], cf[1], zero], [zero, cf[2], cf[3], zero], [zero, zero, zero, cf[4]]];
    let mut dev = T::zero();
    let mut scale = T::one();
    for i in 0..4 {
        for j in 0..4 {
            dev = dev.max((cm.entries[i][j] - expect[i][j]).norm());
            scale = scale.max(expect[i][j].norm());
        }
    }
    if dev > T::lit(16.0) * T::check_tol() * scale {
        return Err(Error::InternalInconsistency {
            context: "inflow critical matrix closed form vs products".into(),
            deviation: dev.as_f64(),
        });
    }
    Ok(cm)
}

/// Inflow critical matrix on the principal branch.
pub fn critical_matrix_inflow<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
) -> Result<CriticalMatrix<T>> {
    critical_matrix_inflow_branch(metric, flow, lp, Branch::Principal)
}

/// Inflow critical matrix at wavenumbers (l, m) and frequency ω, with the
/// branch selected so that Im(k₄) ≥ 0.
pub fn critical_matrix_inflow_at<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    l: T,
    m: T,
    omega: Cx<T>,
) -> Result<CriticalMatrix<T>> {
    let lp = LambdaPair::new(cx(l) / omega, cx(m) / omega);
    critical_matrix_inflow_branch(metric, flow, &lp, Branch::Frequency(omega))
}

/// Generalized eigenvector x of the coalesced acoustic/vorticity root on
/// the ill-posed locus: (k₄*Ã + λ₁B̃ + λ₂C̃ − I)x = −Ãu₄ᴿ, made unique by
/// requiring x to be orthogonal to u₁ᴿ, u₂ᴿ, u₃ᴿ. Returns x and the relative
/// residual of the (generally overdetermined) system; the residual is small
/// only where k₄ coincides with the advective root.
pub fn generalized_eigenvector<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<(Vec5<Cx<T>>, T)> {
    let [a, b, c] = build_curvilinear(metric, flow)?;
    let k4 = crate::eigenvectors::mode_k_star(4, metric, flow, lp, branch)?;
    let u4 = right_eigenvector_branch(4, metric, flow, lp, branch)?;
    let mut rows: Vec<Vec<Cx<T>>> = Vec::with_capacity(8);
    let mut rhs: Vec<Cx<T>> = Vec::with_capacity(8);
    for i in 0..5 {
        let row: Vec<Cx<T>> = (0..5)
            .map(|j| {
                let id = if i == j { T::one() } else { T::zero() };
                k4 * a.m[i][j] + lp.lambda1 * b.m[i][j] + lp.lambda2 * c.m[i][j] - id
            })
            .collect();
        rows.push(row);
        rhs.push(-(0..5).fold(cx(T::zero()), |s, j| s + u4[j] * a.m[i][j]));
    }
    for j in 1..=3 {
        let u = right_eigenvector_branch(j, metric, flow, lp, branch)?;
        rows.push(u.iter().map(|z| z.conj()).collect());
        rhs.push(cx(T::zero()));
    }
    let normal: Vec<Vec<Cx<T>>> = (0..5)
        .map(|p| (0..5).map(|q| rows.iter().fold(cx(T::zero()), |s, r| s + r[p].conj() * r[q])).collect())
        .collect();
    let nrhs: Vec<Cx<T>> =
        (0..5).map(|p| rows.iter().zip(&rhs).fold(cx(T::zero()), |s, (r, v)| s + r[p].conj() * v)).collect();
    let x = csolve(&normal, &nrhs).ok_or(Error::InternalInconsistency {
        context: "generalized eigenvector system is singular".into(),
        deviation: f64::INFINITY,
    })?;
    let mut res = T::zero();
    let mut scale = T::zero();
    for (r, v) in rows.iter().zip(&rhs) {
        let lhs = r.iter().zip(&x).fold(cx(T::zero()), |s, (p, q)| s + p * q);
        res = res.max((lhs - v).norm());
        scale = scale.max(v.norm());
    }
    Ok((std::array::from_fn(|i| x[i]), res / scale.max(T::min_positive_value())))
}

/// Critical matrix whose fourth column is the generalized eigenvector of
/// the coalesced root, i.e. the boundary response to the confluent normal
/// mode (x + iξu₄ᴿ)e^{ikξ} that replaces u₄ᴿ when k₄ = k₃.
pub fn critical_matrix_confluent<T: Real>(
    rows: &[Vec5<Cx<T>>; 4],
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<(CriticalMatrix<T>, T)> {
    let (x, res) = generalized_eigenvector(metric, flow, lp, branch)?;
    let mut cols: Vec<Vec5<Cx<T>>> =
        (1..=3).map(|j| right_eigenvector_branch(j, metric, flow, lp, branch)).collect::<Result<_>>()?;
    cols.push(x);
    let entries = rows.iter().map(|r| cols.iter().map(|c| dot(r, c)).collect()).collect();
    Ok((CriticalMatrix { entries, metric: *metric, flow: *flow, lambda: *lp }, res))
}

/// Frequency of the ill-posed inflow mode on an orthogonal grid:
/// ω = iŪ √((l²|η|² + m²|ζ|²)/|ξ|²).
pub fn illposed_frequency<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, l: T, m: T) -> Cx<T> {
    let n = compute_norms(metric);
    let u = contravariant(metric, flow).u_bar;
    let r = ((l * l * n.norm_eta * n.norm_eta + m * m * n.norm_zeta * n.norm_zeta) / (n.norm_xi * n.norm_xi)).sqrt();
    Cx::new(T::zero(), u.abs() * r)
}

/// Result of the inflow ill-posedness analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IllPosedFinding<T> {
    /// Frequency on the locus; `None` for the degenerate l = m = 0 case.
    pub omega: Option<Cx<T>>,
    pub lambda: Option<LambdaPair<T>>,
    /// Numeric rank of the 4×4 critical matrix at the locus.
    pub rank: usize,
    pub singular_values: Vec<T>,
    /// k₃* = k₃/ω and k₄* = k₄/ω at the locus; both equal 1/Ū.
    pub k3: Option<Cx<T>>,
    pub k4: Option<Cx<T>>,
    /// Residual of γ₁² + γ₂² + γ₃² at the locus.
    pub gamma_sum: Option<Cx<T>>,
    /// Human-readable verdict.
    pub verdict: String,
}

/// Locates the ill-posed inflow mode for an orthogonal grid and subsonic
/// flow in the moving frame.
pub fn detect_illposed_inflow<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    l: T,
    m: T,
) -> Result<IllPosedFinding<T>> {
    if !is_orthogonal(metric) {
        return Err(Error::NonOrthogonalGrid);
    }
    let (cf, n) = preflight(metric, flow)?;
    if cf.u_bar <= T::zero() || cf.u_bar >= n.norm_xi {
        return Err(Error::NotSubsonic);
    }
    require_frame(metric, flow)?;
    let omega = illposed_frequency(metric, flow, l, m);
    if omega.norm() == T::zero() {
        return Ok(IllPosedFinding {
            omega: None,
            lambda: None,
            rank: 4,
            singular_values: Vec::new(),
            k3: None,
            k4: None,
            gamma_sum: None,
            verdict: "none".into(),
        });
    }
    let cm = critical_matrix_inflow_at(metric, flow, l, m, omega)?;
    let lp = cm.lambda;
    let k4 = crate::eigenvectors::mode_k_star(4, metric, flow, &lp, Branch::Frequency(omega))?;
    let k3 = crate::eigenvectors::mode_k_star(3, metric, flow, &lp, Branch::Frequency(omega))?;
    let rank = cm.rank();
    let verdict = if rank < 4 {
        format!("ill-posed with {} ill-posed modes", 4 - rank)
    } else {
        "well-posed at the candidate frequency".into()
    };
    Ok(IllPosedFinding {
        omega: Some(omega),
        lambda: Some(lp),
        rank,
        singular_values: cm.singular_values(),
        k3: Some(k3),
        k4: Some(k4),
        gamma_sum: Some(gamma_sum(metric, flow, &lp)),
        verdict,
    })
}

/// Determinant magnitudes on a grid of complex frequencies around a centre.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminantScan<T> {
    pub center: Cx<T>,
    pub step: T,
    /// `values[i][j]` at ω = centre + step·((i − half) + i(j − half)).
    pub values: Vec<Vec<T>>,
    /// Grid indices of the minimum.
    pub argmin: (usize, usize),
    pub min: T,
}

/// Scans |det Ĉ| over an `n × n` grid of complex frequencies centred on
/// `center` (real offsets along i, imaginary along j). Points with
/// Im(ω) < 0 or ω = 0 are recorded as +∞. Each point is independent, so the
/// result does not depend on evaluation order.
pub fn determinant_scan<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    l: T,
    m: T,
    center: Cx<T>,
    step: T,
    n: usize,
    det_of: impl Fn(&Metric<T>, &MeanFlow<T>, T, T, Cx<T>) -> Result<Cx<T>>,
) -> Result<DeterminantScan<T>> {
    let half = T::from_usize(n / 2).unwrap_or_else(T::zero);
    let mut values = vec![vec![T::infinity(); n]; n];
    let mut best = (0, 0);
    let mut min = T::infinity();
    for (i, row) in values.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let di = T::from_usize(i).unwrap_or_else(T::zero) - half;
            let dj = T::from_usize(j).unwrap_or_else(T::zero) - half;
            let w = center + Cx::new(di * step, dj * step);
            if w.im < T::zero() || w.norm() == T::zero() {
                continue;
            }
            let d = det_of(metric, flow, l, m, w)?.norm();
            *v = d;
            if d < min {
                min = d;
                best = (i, j);
            }
        }
    }
    Ok(DeterminantScan { center, step, values, argmin: best, min })
}

/// |det Ĉ| of the quasi-3D inflow critical matrix; suitable for
/// [`determinant_scan`].
pub fn inflow_determinant<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>, l: T, m: T, omega: Cx<T>) -> Result<Cx<T>> {
    Ok(critical_matrix_inflow_at(metric, flow, l, m, omega)?.det())
}

/// Outflow critical scalar v̄₅ᴸ·u₅ᴿ on a chosen branch. Equal to 1 at λ = 0.
pub fn critical_scalar_outflow<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<CriticalMatrix<T>> {
    require_frame(metric, flow)?;
    let row = truncated_v_left(5, metric, flow, lp)?;
    let col = right_eigenvector_branch(5, metric, flow, lp, branch)?;
    Ok(CriticalMatrix { entries: vec![vec![dot(&row, &col)]], metric: *metric, flow: *flow, lambda: *lp })
}

/// Result of the outflow sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutflowVerdict<T> {
    /// Smallest |Ĉ| over the sweep.
    pub min_abs: T,
    /// (l, m) at the minimum.
    pub argmin: (T, T),
    /// Reference scale: |Ĉ| at λ = 0.
    pub scale: T,
    pub samples: usize,
    pub well_posed: bool,
}

/// Evaluates the outflow critical scalar on the candidate locus
/// ω = iŪ√((l²|η|² + m²|ζ|²)/|ξ|²) over an `n × n` sweep of
/// (l, m) ∈ [−extent, extent]², with the branch Im(k₅) < 0. The boundary is
/// declared well posed when min |Ĉ| exceeds `0.01 ×` the λ = 0 value.
pub fn outflow_wellposed_check<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    extent: T,
    n: usize,
) -> Result<OutflowVerdict<T>> {
    if !is_orthogonal(metric) {
        return Err(Error::NonOrthogonalGrid);
    }
    let (cf, nm) = preflight(metric, flow)?;
    if cf.u_bar <= T::zero() || cf.u_bar >= nm.norm_xi {
        return Err(Error::NotSubsonic);
    }
    require_frame(metric, flow)?;
    let scale = critical_scalar_outflow(metric, flow, &LambdaPair::zero(), Branch::Principal)?.entries[0][0].norm();
    let mut min_abs = T::infinity();
    let mut argmin = (T::zero(), T::zero());
    let denom = T::from_usize(n.saturating_sub(1).max(1)).unwrap_or_else(T::one);
    for i in 0..n {
        for j in 0..n {
            let l = -extent + T::lit(2.0) * extent * T::from_usize(i).unwrap_or_else(T::zero) / denom;
            let m = -extent + T::lit(2.0) * extent * T::from_usize(j).unwrap_or_else(T::zero) / denom;
            let omega = illposed_frequency(metric, flow, l, m);
            let v = if omega.norm() == T::zero() {
                scale
            } else {
                let lp = LambdaPair::new(cx(l) / omega, cx(m) / omega);
                critical_scalar_outflow(metric, flow, &lp, Branch::Frequency(omega))?.entries[0][0].norm()
            };
            if v < min_abs {
                min_abs = v;
                argmin = (l, m);
            }
        }
    }
    Ok(OutflowVerdict { min_abs, argmin, scale, samples: n * n, well_posed: min_abs > T::lit(0.01) * scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moving_frame_zeroes_tangential() {
        let m = Metric::<f64>::new([1.0, 0.2, 0.0], [0.0, 1.0, 0.3], [0.1, 0.0, 1.0]).unwrap();
        let f = MeanFlow::nondimensional(0.5, 0.2, 0.1);
        let g = moving_frame(&m, &f).unwrap();
        let c = contravariant(&m, &g);
        let c0 = contravariant(&m, &f);
        assert!((c.u_bar - c0.u_bar).abs() < 1e-15);
        assert!(c.v_bar.abs() < 1e-15 && c.w_bar.abs() < 1e-15);
    }

    #[test]
    fn cartesian_locus_rank_two() {
        let m = Metric::<f64>::cartesian();
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        let r = detect_illposed_inflow(&m, &f, 1.0, 0.0).unwrap();
        let w = r.omega.unwrap();
        assert!((w - Cx::new(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(r.rank, 2);
        assert!((r.k3.unwrap() - r.k4.unwrap()).norm() < 1e-10);
        assert!((r.k3.unwrap() - cx(2.0)).norm() < 1e-10, "{:?}", r);
        assert!(r.gamma_sum.unwrap().norm() < 1e-12);
    }

    #[test]
    fn degenerate_wavenumbers() {
        let m = Metric::<f64>::cartesian();
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        let r = detect_illposed_inflow(&m, &f, 0.0, 0.0).unwrap();
        assert_eq!(r.verdict, "none");
    }

    #[test]
    fn outflow_scalar_unit_at_zero() {
        let m = Metric::<f64>::cartesian();
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        let c = critical_scalar_outflow(&m, &f, &LambdaPair::zero(), Branch::Principal).unwrap();
        assert!((c.entries[0][0] - cx(1.0)).norm() < 1e-14);
        let v = outflow_wellposed_check(&m, &f, 2.0, 50).unwrap();
        assert!(v.well_posed, "{v:?}");
    }

    #[test]
    fn frame_required() {
        let m = Metric::<f64>::cartesian();
        let f = MeanFlow::nondimensional(0.5, 0.1, 0.0);
        assert_eq!(critical_matrix_inflow(&m, &f, &LambdaPair::zero()).unwrap_err(), Error::NotMovingFrame);
    }
}
