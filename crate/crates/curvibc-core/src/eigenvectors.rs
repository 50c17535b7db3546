//! Right and left eigenvectors of the five wave families as functions of
//! the incidence parameters (λ₁, λ₂), their v-left forms, and the λ → 0
//! limit vectors wₙᴿ, wₙᴸ.
//!
//! Normalization follows `[uₙᴸ uₙᴿ]` = 1 at λ = 0. Vectors are returned as
//! complex 5-arrays in the primitive ordering (ρ′, u′, v′, w′, p′).

use crate::dispersion::{k_star, k_star_for_frequency, preflight, LambdaPair, WaveKind};
use crate::error::{Error, Result};
use crate::linalg::cvec_mat;
use crate::matrices::build_curvilinear;
use crate::metrics::{compute_norms, MeanFlow, Metric};
use crate::scalar::{cx, Cx, Real, Vec5};
use serde::{Deserialize, Serialize};

/// Which square-root branch of S* feeds the acoustic eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Branch<T> {
    /// Principal branch (Re S* ≥ 0), continuous with λ = 0.
    Principal,
    /// Branch selected so that Im(k₄) ≥ 0 at the given frequency.
    Frequency(Cx<T>),
}

/// One wave family evaluated at a λ pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode<T> {
    /// Mode index 1..=5.
    pub n: usize,
    pub kind: WaveKind,
    /// k*ₙ = kₙ/ω for this λ pair.
    pub k_star: Cx<T>,
    pub right: Vec5<Cx<T>>,
    pub left: Vec5<Cx<T>>,
    pub v_left: Vec5<Cx<T>>,
}

/// λ → 0 limits of the right and left eigenvectors (real valued).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitVectors<T> {
    /// wₙᴿ for n = 1..5 (index n − 1).
    pub right: [Vec5<T>; 5],
    /// wₙᴸ for n = 1..5 (index n − 1).
    pub left: [Vec5<T>; 5],
}

/// Shared ingredients of every family at one λ pair.
struct Ctx<T> {
    xi: [T; 3],
    eta: [T; 3],
    zeta: [T; 3],
    u: T,
    v: T,
    w: T,
    norm_xi: T,
    psi2: T,
    psi3: T,
    mu: Cx<T>,
    l1: Cx<T>,
    l2: Cx<T>,
}

impl<T: Real> Ctx<T> {
    fn new(metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Result<Self> {
        let (cf, n) = preflight(metric, flow)?;
        let mu = cx(T::one()) - lp.lambda1 * cf.v_bar - lp.lambda2 * cf.w_bar;
        Ok(Self {
            xi: metric.xi(),
            eta: metric.eta(),
            zeta: metric.zeta(),
            u: cf.u_bar,
            v: cf.v_bar,
            w: cf.w_bar,
            norm_xi: n.norm_xi,
            psi2: n.psi2,
            psi3: n.psi3,
            mu,
            l1: lp.lambda1,
            l2: lp.lambda2,
        })
    }

    /// Tangential part η_a λ₁ + ζ_a λ₂.
    fn tang(&self, a: usize) -> Cx<T> {
        self.l1 * self.eta[a] + self.l2 * self.zeta[a]
    }

    /// ξ_a μ* + Ū(η_a λ₁ + ζ_a λ₂), the entries of the vorticity vectors.
    fn vort(&self, a: usize) -> Cx<T> {
        self.mu * self.xi[a] + self.tang(a) * self.u
    }

    /// ξ_a k* + η_a λ₁ + ζ_a λ₂, the acoustic α_a/ω.
    fn alpha(&self, a: usize, k: Cx<T>) -> Cx<T> {
        k * self.xi[a] + self.tang(a)
    }

    fn check_psi(&self, n: usize) -> Result<()> {
        let tol = T::check_tol() * self.norm_xi;
        match n {
            2 if self.psi2 <= tol => Err(Error::DegenerateNormalization("psi2")),
            3 if self.psi3 <= tol => Err(Error::DegenerateNormalization("psi3")),
            _ => Ok(()),
        }
    }
}

fn acoustic_k<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Cx<T>> {
    match branch {
        Branch::Principal => k_star(n, metric, flow, lp),
        Branch::Frequency(w) => k_star_for_frequency(n, metric, flow, lp, w),
    }
}

/// k*ₙ for any mode: μ*/Ū for the convected waves, the acoustic closed form
/// otherwise.
pub fn mode_k_star<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Cx<T>> {
    let c = Ctx::new(metric, flow, lp)?;
    match n {
        1..=3 => Ok(c.mu / c.u),
        4 | 5 => acoustic_k(n, metric, flow, lp, branch),
        _ => Err(Error::InvalidModeIndex(n)),
    }
}

/// Right eigenvector uₙᴿ on the principal S* branch.
pub fn right_eigenvector<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
) -> Result<Vec5<Cx<T>>> {
    right_eigenvector_branch(n, metric, flow, lp, Branch::Principal)
}

/// Right eigenvector uₙᴿ on a chosen S* branch.
pub fn right_eigenvector_branch<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Vec5<Cx<T>>> {
    let c = Ctx::new(metric, flow, lp)?;
    c.check_psi(n)?;
    let z = cx(T::zero());
    let nx2 = c.norm_xi * c.norm_xi;
    match n {
        1 => Ok([cx(-T::one() / c.norm_xi), z, z, z, z]),
        2 => {
            let s = T::one() / (c.psi2 * c.psi2);
            Ok([z, -c.vort(1) * s, c.vort(0) * s, z, z])
        }
        3 => {
            let s = T::one() / (c.psi3 * c.psi3);
            Ok([z, -c.vort(2) * s, z, c.vort(0) * s, z])
        }
        4 => {
            let k = acoustic_k(4, metric, flow, lp, branch)?;
            let pre = (c.u + c.norm_xi) / (T::lit(2.0) * nx2);
            let e = (c.mu - k * c.u) * pre;
            Ok([e, c.alpha(0, k) * pre, c.alpha(1, k) * pre, c.alpha(2, k) * pre, e])
        }
        5 => {
            let k = acoustic_k(5, metric, flow, lp, branch)?;
            let pre = (c.u - c.norm_xi) / (T::lit(2.0) * nx2);
            let e = (k * c.u - c.mu) * pre;
            Ok([e, -c.alpha(0, k) * pre, -c.alpha(1, k) * pre, -c.alpha(2, k) * pre, e])
        }
        _ => Err(Error::InvalidModeIndex(n)),
    }
}

/// Left eigenvector uₙᴸ on the principal S* branch.
pub fn left_eigenvector<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
) -> Result<Vec5<Cx<T>>> {
    left_eigenvector_branch(n, metric, flow, lp, Branch::Principal)
}

/// Left eigenvector uₙᴸ on a chosen S* branch.
pub fn left_eigenvector_branch<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Vec5<Cx<T>>> {
    let c = Ctx::new(metric, flow, lp)?;
    c.check_psi(n)?;
    let z = cx(T::zero());
    match n {
        1 => Ok([cx(-c.norm_xi), z, z, z, cx(c.norm_xi)]),
        2 => Ok([z, -c.vort(1), c.vort(0), z, z]),
        3 => Ok([z, -c.vort(2), z, c.vort(0), z]),
        4 => {
            let k = acoustic_k(4, metric, flow, lp, branch)?;
            let pre = c.u + c.norm_xi;
            let e = (c.mu - k * c.u) * pre;
            Ok([z, c.alpha(0, k) * pre, c.alpha(1, k) * pre, c.alpha(2, k) * pre, e])
        }
        5 => {
            let k = acoustic_k(5, metric, flow, lp, branch)?;
            let pre = c.u - c.norm_xi;
            let e = (k * c.u - c.mu) * pre;
            Ok([z, -c.alpha(0, k) * pre, -c.alpha(1, k) * pre, -c.alpha(2, k) * pre, e])
        }
        _ => Err(Error::InvalidModeIndex(n)),
    }
}

/// Limit of k*ₙ as λ → 0: 1/Ū for the convected waves, 1/(Ū ± |ξ|) for the
/// acoustic ones.
pub fn limit_k_star<T: Real>(n: usize, metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<T> {
    let (cf, nm) = preflight(metric, flow)?;
    match n {
        1..=3 => Ok(T::one() / cf.u_bar),
        4 => Ok(T::one() / (cf.u_bar + nm.norm_xi)),
        5 => Ok(T::one() / (cf.u_bar - nm.norm_xi)),
        _ => Err(Error::InvalidModeIndex(n)),
    }
}

/// vₙᴸ from its definition (lim k*ₙ)·uₙᴸ·Ã.
pub fn v_left_product<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Vec5<Cx<T>>> {
    let ul = left_eigenvector_branch(n, metric, flow, lp, branch)?;
    let a = build_curvilinear(metric, flow)?[0].m;
    let lim = limit_k_star(n, metric, flow)?;
    Ok(cvec_mat(&ul, &a).map(|e| e * lim))
}

/// Closed-form vₙᴸ on the principal S* branch, cross-checked against
/// [`v_left_product`].
pub fn v_left<T: Real>(n: usize, metric: &Metric<T>, flow: &MeanFlow<T>, lp: &LambdaPair<T>) -> Result<Vec5<Cx<T>>> {
    v_left_branch(n, metric, flow, lp, Branch::Principal)
}

/// Closed-form vₙᴸ on a chosen S* branch. Entries 2–4 of the acoustic rows
/// and every convected row are affine in (λ₁, λ₂); the fifth acoustic entry
/// carries k*ₙ(|ξ|² − Ū²).
pub fn v_left_branch<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Vec5<Cx<T>>> {
    let c = Ctx::new(metric, flow, lp)?;
    c.check_psi(n)?;
    let nm = compute_norms(metric);
    let z = cx(T::zero());
    let cross = |a: usize| c.tang(0) * c.xi[a] - c.tang(a) * c.xi[0];
    let acoustic = |a: usize| -> Cx<T> {
        cx(c.xi[a]) + c.l1 * (c.u * c.eta[a] - c.v * c.xi[a]) + c.l2 * (c.u * c.zeta[a] - c.w * c.xi[a])
    };
    let d = c.norm_xi * c.norm_xi - c.u * c.u;
    let out = match n {
        1 => [cx(-c.norm_xi), z, z, z, cx(c.norm_xi)],
        2 => [z, -c.vort(1), c.vort(0), z, cross(1)],
        3 => [z, -c.vort(2), z, c.vort(0), cross(2)],
        4 | 5 => {
            let k = acoustic_k(n, metric, flow, lp, branch)?;
            let fifth = cx(c.u) + k * d + c.l1 * (nm.dot_xieta - c.u * c.v) + c.l2 * (nm.dot_xizeta - c.u * c.w);
            let row = [z, acoustic(0), acoustic(1), acoustic(2), fifth];
            if n == 4 {
                row
            } else {
                row.map(|e| -e)
            }
        }
        _ => return Err(Error::InvalidModeIndex(n)),
    };
    let prod = v_left_product(n, metric, flow, lp, branch)?;
    let scale = out.iter().chain(prod.iter()).fold(T::one(), |s, e| s.max(e.norm()));
    let dev = out.iter().zip(prod.iter()).fold(T::zero(), |s, (a, b)| s.max((a - b).norm()));
    if dev > T::check_tol() * scale {
        return Err(Error::InternalInconsistency {
            context: format!("v_left closed form vs product, mode {n}"),
            deviation: dev.as_f64(),
        });
    }
    Ok(out)
}

/// Full [`Mode`] record for family `n` on the chosen branch.
pub fn mode<T: Real>(
    n: usize,
    metric: &Metric<T>,
    flow: &MeanFlow<T>,
    lp: &LambdaPair<T>,
    branch: Branch<T>,
) -> Result<Mode<T>> {
    Ok(Mode {
        n,
        kind: WaveKind::of_mode(n)?,
        k_star: mode_k_star(n, metric, flow, lp, branch)?,
        right: right_eigenvector_branch(n, metric, flow, lp, branch)?,
        left: left_eigenvector_branch(n, metric, flow, lp, branch)?,
        v_left: v_left_branch(n, metric, flow, lp, branch)?,
    })
}

/// Closed-form λ → 0 limit vectors.
pub fn limit_vectors<T: Real>(metric: &Metric<T>, flow: &MeanFlow<T>) -> Result<LimitVectors<T>> {
    let (_, n) = preflight(metric, flow)?;
    let tol = T::check_tol() * n.norm_xi;
    if n.psi2 <= tol {
        return Err(Error::DegenerateNormalization("psi2"));
    }
    if n.psi3 <= tol {
        return Err(Error::DegenerateNormalization("psi3"));
    }
    let xi = metric.xi();
    let nx = n.norm_xi;
    let z = T::zero();
    let two = T::lit(2.0);
    let p2 = n.psi2 * n.psi2;
    let p3 = n.psi3 * n.psi3;
    let h = T::one() / (two * nx);
    let h2 = T::one() / (two * nx * nx);
    let right = [
        [-T::one() / nx, z, z, z, z],
        [z, -xi[1] / p2, xi[0] / p2, z, z],
        [z, -xi[2] / p3, z, xi[0] / p3, z],
        [h, xi[0] * h2, xi[1] * h2, xi[2] * h2, h],
        [h, -xi[0] * h2, -xi[1] * h2, -xi[2] * h2, h],
    ];
    let left = [
        [-nx, z, z, z, nx],
        [z, -xi[1], xi[0], z, z],
        [z, -xi[2], z, xi[0], z],
        [z, xi[0], xi[1], xi[2], nx],
        [z, -xi[0], -xi[1], -xi[2], nx],
    ];
    Ok(LimitVectors { right, left })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cdot;

    fn cart() -> (Metric<f64>, MeanFlow<f64>) {
        (Metric::cartesian(), MeanFlow::nondimensional(0.5, 0.0, 0.0))
    }

    #[test]
    fn entropy_vectors() {
        let m = Metric::new([3.0, 4.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let f = MeanFlow::nondimensional(0.5, 0.0, 0.0);
        let lp = LambdaPair::real(0.1, -0.2);
        let r = right_eigenvector(1, &m, &f, &lp).unwrap();
        assert!((r[0] - cx(-0.2)).norm() < 1e-15);
        let l = left_eigenvector(1, &m, &f, &lp).unwrap();
        assert_eq!(l[0], cx(-5.0));
        assert_eq!(l[4], cx(5.0));
        let v = v_left(1, &m, &f, &lp).unwrap();
        assert_eq!(v, l);
    }

    #[test]
    fn acoustic_cartesian_values() {
        let (m, f) = cart();
        let lp = LambdaPair::zero();
        let r = right_eigenvector(4, &m, &f, &lp).unwrap();
        let expect = [0.5, 0.5, 0.0, 0.0, 0.5];
        for (a, b) in r.iter().zip(expect) {
            assert!((a - cx(b)).norm() < 1e-15);
        }
        let v = v_left(4, &m, &f, &lp).unwrap();
        let expect = [0.0, 1.0, 0.0, 0.0, 1.0];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - cx(b)).norm() < 1e-15);
        }
    }

    #[test]
    fn normalization_at_zero() {
        let m = Metric::new([1.0, 0.3, 0.2], [0.1, 1.2, 0.0], [0.0, 0.2, 0.9]).unwrap();
        let f = MeanFlow::nondimensional(0.4, 0.1, -0.1);
        let lp = LambdaPair::zero();
        for n in 1..=5 {
            let r = right_eigenvector(n, &m, &f, &lp).unwrap();
            let l = left_eigenvector(n, &m, &f, &lp).unwrap();
            assert!((cdot(&l, &r) - cx(1.0)).norm() < 1e-12, "mode {n}");
        }
    }

    #[test]
    fn limit_vectors_match_general_families() {
        let m = Metric::new([1.0, 0.3, 0.2], [0.1, 1.2, 0.0], [0.0, 0.2, 0.9]).unwrap();
        let f = MeanFlow::nondimensional(0.4, 0.1, -0.1);
        let w = limit_vectors(&m, &f).unwrap();
        let lp = LambdaPair::zero();
        for n in 1..=5 {
            let r = right_eigenvector(n, &m, &f, &lp).unwrap();
            let l = left_eigenvector(n, &m, &f, &lp).unwrap();
            for i in 0..5 {
                assert!((r[i] - cx(w.right[n - 1][i])).norm() < 1e-14);
                assert!((l[i] - cx(w.left[n - 1][i])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_normalization() {
        let m = Metric::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let f = MeanFlow::nondimensional(0.0, 0.0, 0.5);
        let e = right_eigenvector(2, &m, &f, &LambdaPair::zero()).unwrap_err();
        assert_eq!(e, Error::DegenerateNormalization("psi2"));
    }
}
