//! Second-order (quasi-3D) boundary operators.
//!
//! The v-left rows are expanded to first order in (λ₁, λ₂). Replacing
//! ω, l, m by i∂ₜ, −i∂_η, −i∂_ζ turns the truncated rows into
//!
//! ```text
//! time_rows · Qₜ + G · Q_η + H · Q_ζ = 0,
//! ```
//!
//! with `time_rows = vₙᴸ(0,0)`, `G = −∂vₙᴸ/∂λ₁` and `H = −∂vₙᴸ/∂λ₂` at λ = 0.
//! Rows 1–4 apply at the inflow face, row 5 at the outflow face.

use crate::bc_first_order::{build_transform, ScalingMode, Side};
use crate::dispersion::{k_star_gradient_at_zero, preflight};
use crate::error::{Error, Result};
use crate::metrics::{compute_norms, contravariant, MeanFlow, Metric, MetricNorms};
use crate::scalar::{Cx, Real, Vec5};
use serde::{Deserialize, Serialize};

/// Variables the operator acts on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Primitive perturbations (ρ′, u′, v′, w′, p′).
    #[default]
    Primitive,
    /// Characteristic amplitudes c₁…c₅.
    Characteristic,
}

/// Which boundary-condition family an operator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Zeroth-order truncation: G = H = 0.
    FirstOrder,
    /// First-order Taylor truncation in λ.
    Quasi3d,
    /// Quasi-3D inflow rows with the m₁/m₂ corrections in row 4.
    Modified,
}

/// Reading of the ζ-table entry h₄₄ in the characteristic basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H44Reading {
    /// h₄₄ = −Ū|ξζ|/|ξ|² + W̄, the ζ analogue of g₄₄ and equal to h₅₅.
    #[default]
    XiZeta,
    /// h₄₄ = −Ū|ξη|/|ξ|² + W̄ as literally tabulated.
    XiEtaLiteral,
}

/// Build options shared by the quasi-3D and modified operators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcOptions {
    pub basis: Basis,
    pub mode: ScalingMode,
    pub h44: H44Reading,
}

/// Assembled boundary operator `time_rows·Qₜ + G·Q_η + H·Q_ζ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcOperator<T> {
    pub side: Side,
    pub basis: Basis,
    pub variant: Variant,
    pub mode: ScalingMode,
    pub h44: H44Reading,
    /// r × 5 (r = 4 at inflow, 1 at outflow).
    pub time_rows: Vec<Vec5<T>>,
    pub g: Vec<Vec5<T>>,
    pub h: Vec<Vec5<T>>,
}

/// Taylor coefficients of vₙᴸ at λ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorRows<T> {
    pub v0: Vec5<T>,
    pub d_lambda1: Vec5<T>,
    pub d_lambda2: Vec5<T>,
}

/// One tangential direction: its metric gradient, contravariant velocity
/// and inner product with ∇ξ.
#[derive(Clone, Copy)]
struct Tangent<T> {
    g: [T; 3],
    vel: T,
    dot: T,
}

fn tangents<T: Real>(metric: &Metric<T>, v: T, w: T, n: &MetricNorms<T>) -> [Tangent<T>; 2] {
    [Tangent { g: metric.eta(), vel: v, dot: n.dot_xieta }, Tangent { g: metric.zeta(), vel: w, dot: n.dot_xizeta }]
}

/// Analytic Taylor coefficients of vₙᴸ for a nondimensional flow. The
/// acoustic fifth entries use the chain-rule derivative of k*ₙ.
pub fn taylor_v_left<T: Real>(n: usize, metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<TaylorRows<T>> {
    let (cf, nm) = preflight(metric, flow)?;
    let z = T::zero();
    let x = metric.xi();
    let u = cf.u_bar;
    let nx = nm.norm_xi;
    let d = nx * nx - u * u;
    let tol = T::check_tol() * nx;
    if n == 2 && nm.psi2 <= tol {
        return Err(Error::DegenerateNormalization("psi2"));
    }
    if n == 3 && nm.psi3 <= tol {
        return Err(Error::DegenerateNormalization("psi3"));
    }
    let tg = tangents(metric, cf.v_bar, cf.w_bar, &nm);
    let kgrad = match n {
        4 | 5 => Some(k_star_gradient_at_zero(n, metric, flow)?),
        _ => None,
    };
    let deriv = |a: usize| -> Result<Vec5<T>> {
        let t = tg[a];
        let e = |i: usize| u * t.g[i] - t.vel * x[i];
        Ok(match n {
            1 => [z; 5],
            2 => [z, -e(1), e(0), z, x[1] * t.g[0] - x[0] * t.g[1]],
            3 => [z, -e(2), z, e(0), x[2] * t.g[0] - x[0] * t.g[2]],
            4 | 5 => {
                let dk = kgrad.expect("acoustic gradient")[a];
                let row = [z, e(0), e(1), e(2), d * dk + t.dot - u * t.vel];
                if n == 4 {
                    row
                } else {
                    row.map(|q| -q)
                }
            }
            _ => return Err(Error::InvalidModeIndex(n)),
        })
    };
    let v0 = match n {
        1 => [-nx, z, z, z, nx],
        2 => [z, -x[1], x[0], z, z],
        3 => [z, -x[2], z, x[0], z],
        4 => [z, x[0], x[1], x[2], nx],
        5 => [z, -x[0], -x[1], -x[2], nx],
        _ => return Err(Error::InvalidModeIndex(n)),
    };
    Ok(TaylorRows { v0, d_lambda1: deriv(0)?, d_lambda2: deriv(1)? })
}

/// Nondimensional primitive table for one tangential direction, rows 1–5.
fn primitive_table<T: Real>(x: [T; 3], nx: T, u: T, t: Tangent<T>) -> [Vec5<T>; 5] {
    let z = T::zero();
    let e = |i: usize| u * t.g[i] - t.vel * x[i];
    let fifth = -u * t.dot / nx + t.vel * nx;
    [
        [z; 5],
        [z, e(1), -e(0), z, x[0] * t.g[1] - x[1] * t.g[0]],
        [z, e(2), z, -e(0), x[0] * t.g[2] - x[2] * t.g[0]],
        [z, -e(0), -e(1), -e(2), fifth],
        [z, e(0), e(1), e(2), fifth],
    ]
}

/// Nondimensional characteristic table for one tangential direction.
/// `dot44` is the inner product used in entry (4,4).
fn characteristic_table<T: Real>(x: [T; 3], n: &MetricNorms<T>, u: T, t: Tangent<T>, dot44: T) -> [Vec5<T>; 5] {
    let z = T::zero();
    let two = T::lit(2.0);
    let nx = n.norm_xi;
    let p2 = n.psi2 * n.psi2;
    let p3 = n.psi3 * n.psi3;
    let plus = (nx + u) / (two * nx * nx);
    let minus = (nx - u) / (two * nx * nx);
    let e = |i: usize| u * t.g[i] - t.vel * x[i];
    let c2 = x[0] * t.g[1] - x[1] * t.g[0];
    let c3 = x[0] * t.g[2] - x[2] * t.g[0];
    let g42 = -u * c2 / p2;
    let g43 = -u * c3 / p3;
    [
        [z; 5],
        [z, -u * (x[1] * t.g[1] + x[0] * t.g[0]) / p2 + t.vel, -x[2] * e(1) / p3, plus * c2, minus * c2],
        [z, -x[1] * e(2) / p2, -u * (x[2] * t.g[2] + x[0] * t.g[0]) / p3 + t.vel, plus * c3, minus * c3],
        [z, g42, g43, -u * dot44 / (nx * nx) + t.vel, z],
        [z, -g42, -g43, z, -u * t.dot / (nx * nx) + t.vel],
    ]
}

/// m₁/m₂ corrections applied to row 4 of the nondimensional tables.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RowFourCorrection<T> {
    pub m1: T,
    pub m2: T,
}

fn rows_for(side: Side) -> std::ops::Range<usize> {
    match side {
        Side::Inflow => 0..4,
        Side::Outflow => 4..5,
    }
}

/// Assembles an operator. `correction` is applied only at the inflow face.
pub(crate) fn assemble<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    side: Side,
    opts: BcOptions,
    variant: Variant,
    correction: Option<RowFourCorrection<T>>,
) -> Result<BcOperator<T>> {
    let nd = flow.to_nondimensional();
    let (cf, nm) = preflight(metric, &nd)?;
    let tol = T::check_tol() * nm.norm_xi;
    if nm.psi2 <= tol {
        return Err(Error::DegenerateNormalization("psi2"));
    }
    if nm.psi3 <= tol {
        return Err(Error::DegenerateNormalization("psi3"));
    }
    let x = metric.xi();
    let u = cf.u_bar;
    let tg = tangents(metric, cf.v_bar, cf.w_bar, &nm);
    let mut gp = primitive_table(x, nm.norm_xi, u, tg[0]);
    let mut hp = primitive_table(x, nm.norm_xi, u, tg[1]);
    let h44_dot = match opts.h44 {
        H44Reading::XiZeta => nm.dot_xizeta,
        H44Reading::XiEtaLiteral => nm.dot_xieta,
    };
    let mut gc = characteristic_table(x, &nm, u, tg[0], nm.dot_xieta);
    let mut hc = characteristic_table(x, &nm, u, tg[1], h44_dot);
    if variant == Variant::FirstOrder {
        for t in [&mut gp, &mut hp, &mut gc, &mut hc] {
            *t = [[T::zero(); 5]; 5];
        }
    }
    if let (Some(c), Side::Inflow) = (correction, side) {
        gp[3][1] += c.m1 * x[1];
        gp[3][2] -= c.m1 * x[0];
        hp[3][1] += c.m2 * x[2];
        hp[3][3] -= c.m2 * x[0];
        gc[3][1] -= c.m1;
        gc[3][2] -= c.m1 * x[1] * x[2] / (nm.psi3 * nm.psi3);
        hc[3][1] -= c.m2 * x[1] * x[2] / (nm.psi2 * nm.psi2);
        hc[3][2] -= c.m2;
    }

    // Dimensional scaling: primitive G = ρc³·G_nd·diag(1/ρ, 1/c, 1/c, 1/c, 1/(ρc²)),
    // characteristic G = c·G_nd.
    let (rho, c) = match opts.mode {
        ScalingMode::Nondimensional => (T::one(), T::one()),
        ScalingMode::Dimensional => (flow.rho_bar, flow.c_bar),
    };
    let col = [T::one() / rho, T::one() / c, T::one() / c, T::one() / c, T::one() / (rho * c * c)];
    let pre = rho * c * c * c;
    for t in [&mut gp, &mut hp] {
        for row in t.iter_mut() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = *e * pre * col[j];
            }
        }
    }
    for t in [&mut gc, &mut hc] {
        for row in t.iter_mut() {
            for e in row.iter_mut() {
                *e *= c;
            }
        }
    }

    let tr = build_transform(metric, flow, opts.mode)?;
    let rows = rows_for(side);
    // Similarity check: characteristic rows equal primitive rows times the
    // reconstruction matrix.
    let skip_h44 = opts.h44 == H44Reading::XiEtaLiteral;
    let mut dev = T::zero();
    let mut scale = T::one();
    for (tp, tc, is_h) in [(&gp, &gc, false), (&hp, &hc, true)] {
        for r in rows.clone() {
            for j in 0..5 {
                if is_h && skip_h44 && r == 3 && j == 3 {
                    continue;
                }
                let s: T = (0..5).map(|q| tp[r][q] * tr.from_char[q][j]).sum();
                dev = dev.max((s - tc[r][j]).abs());
                scale = scale.max(tc[r][j].abs()).max(s.abs());
            }
        }
    }
    if dev > T::lit(16.0) * T::check_tol() * scale {
        return Err(Error::InternalInconsistency {
            context: "characteristic vs primitive boundary tables".into(),
            deviation: dev.as_f64(),
        });
    }

    let (time_rows, g, h) = match opts.basis {
        Basis::Primitive => (
            rows.clone().map(|r| tr.to_char[r]).collect(),
            rows.clone().map(|r| gp[r]).collect(),
            rows.clone().map(|r| hp[r]).collect(),
        ),
        Basis::Characteristic => (
            rows.clone()
                .map(|r| {
                    let mut e = [T::zero(); 5];
                    e[r] = T::one();
                    e
                })
                .collect(),
            rows.clone().map(|r| gc[r]).collect(),
            rows.clone().map(|r| hc[r]).collect(),
        ),
    };
    Ok(BcOperator { side, basis: opts.basis, variant, mode: opts.mode, h44: opts.h44, time_rows, g, h })
}

/// Builds the quasi-3D operator for one face.
pub fn build_quasi3d<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    side: Side,
    opts: BcOptions,
) -> Result<BcOperator<T>> {
    assemble(metric, flow, side, opts, Variant::Quasi3d, None)
}

/// Builds the first-order operator (G = H = 0) in the same residual form.
pub fn build_first_order_operator<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    side: Side,
    opts: BcOptions,
) -> Result<BcOperator<T>> {
    assemble(metric, flow, side, opts, Variant::FirstOrder, None)
}

/// Builds an operator directly from Taylor rows (primitive basis,
/// nondimensional). With `include_lambda = false` the λ-coefficients are
/// dropped, which yields the first-order operator.
pub fn operator_from_taylor<T: Real>(
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    side: Side,
    include_lambda: bool,
) -> Result<BcOperator<T>> {
    let mut time_rows = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for r in rows_for(side) {
        let t = taylor_v_left(r + 1, metric, flow)?;
        time_rows.push(t.v0);
        let s = if include_lambda { -T::one() } else { T::zero() };
        g.push(t.d_lambda1.map(|e| e * s));
        h.push(t.d_lambda2.map(|e| e * s));
    }
    Ok(BcOperator {
        side,
        basis: Basis::Primitive,
        variant: if include_lambda { Variant::Quasi3d } else { Variant::FirstOrder },
        mode: ScalingMode::Nondimensional,
        h44: H44Reading::XiZeta,
        time_rows,
        g,
        h,
    })
}

/// Boundary residual `time_rows·qt + G·q_eta + H·q_zeta`.
pub fn bc_residual<T: Real>(op: &BcOperator<T>, qt: &Vec5<T>, q_eta: &Vec5<T>, q_zeta: &Vec5<T>) -> Vec<T> {
    (0..op.time_rows.len())
        .map(|r| (0..5).map(|j| op.time_rows[r][j] * qt[j] + op.g[r][j] * q_eta[j] + op.h[r][j] * q_zeta[j]).sum())
        .collect()
}

/// Complex residual for modal fields.
pub fn bc_residual_complex<T: Real>(
    op: &BcOperator<T>,
    qt: &Vec5<Cx<T>>,
    q_eta: &Vec5<Cx<T>>,
    q_zeta: &Vec5<Cx<T>>,
) -> Vec<Cx<T>> {
    (0..op.time_rows.len())
        .map(|r| {
            (0..5)
                .map(|j| qt[j] * op.time_rows[r][j] + q_eta[j] * op.g[r][j] + q_zeta[j] * op.h[r][j])
                .fold(Cx::new(T::zero(), T::zero()), |a, b| a + b)
        })
        .collect()
}

/// Residual of the operator on the modal solution
/// `Q = u_R exp(i(kξ + lη + mζ − ωt))` divided by |ω|:
/// `|time_rows·u_R − λ₁G·u_R − λ₂H·u_R|` per row.
pub fn modal_residual<T: Real>(op: &BcOperator<T>, right: &Vec5<Cx<T>>, lambda1: Cx<T>, lambda2: Cx<T>) -> Vec<Cx<T>> {
    let qt = *right;
    let qe = right.map(|e| -e * lambda1);
    let qz = right.map(|e| -e * lambda2);
    bc_residual_complex(op, &qt, &qe, &qz)
}

/// Contravariant velocities for the nondimensionalized flow; convenience
/// for reports.
pub fn nondimensional_contravariant<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> [T; 3] {
    let cf = contravariant(metric, &flow.to_nondimensional());
    [cf.u_bar, cf.v_bar, cf.w_bar]
}

/// Metric norms re-exported for table reports.
pub fn norms<T: Real>(metric: &Metric<T>) -> MetricNorms<T> {
    compute_norms(metric)
}
