//! Independent numerical references built on nalgebra: eigenvalues of the
//! dispersion pencil and LU determinants.

use curvibc_core::matrices::build_curvilinear;
use curvibc_core::{Cx, Mat5, MeanFlow, Metric};
use nalgebra::{Complex, Matrix5};

/// k-roots of det(−ωI + kÃ + lB̃ + mC̃) = 0 for real (l, m, ω), computed as
/// the eigenvalues of Ã⁻¹(ωI − lB̃ − mC̃) through a real Schur
/// decomposition. `None` when Ã is singular or the flux matrices cannot be
/// built.
pub fn pencil_roots(metric: &Metric<f64>, flow: &MeanFlow<f64>, l: f64, m: f64, omega: f64) -> Option<Vec<Cx<f64>>> {
    let [a, b, c] = build_curvilinear(metric, flow).ok()?;
    let am = Matrix5::from_fn(|i, j| a.m[i][j]);
    let rhs = Matrix5::from_fn(|i, j| if i == j { omega } else { 0.0 } - l * b.m[i][j] - m * c.m[i][j]);
    let p = am.lu().solve(&rhs)?;
    Some(p.complex_eigenvalues().iter().map(|z| Cx::new(z.re, z.im)).collect())
}

/// Determinant of a complex 5×5 matrix by LU with partial pivoting.
pub fn lu_determinant(m: &Mat5<Cx<f64>>) -> Cx<f64> {
    let a = Matrix5::from_fn(|i, j| Complex::new(m[i][j].re, m[i][j].im));
    let d = a.lu().determinant();
    Cx::new(d.re, d.im)
}

/// Largest distance from each of `computed` to a distinct entry of
/// `reference` under a greedy nearest matching, divided by `scale`.
pub fn matched_error(computed: &[Cx<f64>], reference: &[Cx<f64>], scale: f64) -> f64 {
    let mut used = vec![false; reference.len()];
    let mut worst: f64 = 0.0;
    for z in computed {
        let best = reference
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, r)| (i, (z - r).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((i, d)) => {
                used[i] = true;
                worst = worst.max(d / scale);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}
