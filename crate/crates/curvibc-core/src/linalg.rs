//! Small dense linear-algebra kernels used by the analysis modules.
//!
//! The matrices in this library are at most 5×5, so the routines favour
//! clarity over blocking. Everything is generic over [`Real`].

use crate::scalar::{Cx, Mat5, Real, Vec5};

/// The 5×5 identity.
pub fn identity5<T: Real>() -> Mat5<T> {
    let mut m = [[T::zero(); 5]; 5];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

/// The 5×5 zero matrix.
pub fn zeros5<T: Real>() -> Mat5<T> {
    [[T::zero(); 5]; 5]
}

/// Matrix product `a · b`.
pub fn mat_mul<T: Real>(a: &Mat5<T>, b: &Mat5<T>) -> Mat5<T> {
    let mut c = zeros5();
    for i in 0..5 {
        for j in 0..5 {
            let mut s = T::zero();
            for k in 0..5 {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    c
}

/// Matrix-vector product `a · x`.
pub fn mat_vec<T: Real>(a: &Mat5<T>, x: &Vec5<T>) -> Vec5<T> {
    let mut y = [T::zero(); 5];
    for i in 0..5 {
        for k in 0..5 {
            y[i] += a[i][k] * x[k];
        }
    }
    y
}

/// Row-vector times matrix `x · a`.
pub fn vec_mat<T: Real>(x: &Vec5<T>, a: &Mat5<T>) -> Vec5<T> {
    let mut y = [T::zero(); 5];
    for j in 0..5 {
        for k in 0..5 {
            y[j] += x[k] * a[k][j];
        }
    }
    y
}

/// Complex row-vector times real matrix.
pub fn cvec_mat<T: Real>(x: &Vec5<Cx<T>>, a: &Mat5<T>) -> Vec5<Cx<T>> {
    let mut y = [Cx::new(T::zero(), T::zero()); 5];
    for j in 0..5 {
        for k in 0..5 {
            y[j] += x[k] * a[k][j];
        }
    }
    y
}

/// Complex matrix times complex column vector.
pub fn cmat_vec<T: Real>(a: &Mat5<Cx<T>>, x: &Vec5<Cx<T>>) -> Vec5<Cx<T>> {
    let mut y = [Cx::new(T::zero(), T::zero()); 5];
    for i in 0..5 {
        for k in 0..5 {
            y[i] += a[i][k] * x[k];
        }
    }
    y
}

/// Complex row vector times complex matrix.
pub fn cvec_cmat<T: Real>(x: &Vec5<Cx<T>>, a: &Mat5<Cx<T>>) -> Vec5<Cx<T>> {
    let mut y = [Cx::new(T::zero(), T::zero()); 5];
    for j in 0..5 {
        for k in 0..5 {
            y[j] += x[k] * a[k][j];
        }
    }
    y
}

/// Bilinear dot product of two complex 5-vectors (no conjugation).
pub fn cdot<T: Real>(a: &Vec5<Cx<T>>, b: &Vec5<Cx<T>>) -> Cx<T> {
    let mut s = Cx::new(T::zero(), T::zero());
    for i in 0..5 {
        s += a[i] * b[i];
    }
    s
}

/// Real dot product of two 5-vectors.
pub fn dot5<T: Real>(a: &Vec5<T>, b: &Vec5<T>) -> T {
    let mut s = T::zero();
    for i in 0..5 {
        s += a[i] * b[i];
    }
    s
}

/// Euclidean norm of a complex 5-vector.
pub fn cnorm<T: Real>(a: &Vec5<Cx<T>>) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Largest absolute entry of a real matrix.
pub fn max_abs<T: Real>(a: &Mat5<T>) -> T {
    a.iter().flat_map(|r| r.iter()).fold(T::zero(), |m, v| m.max(v.abs()))
}

/// Largest absolute entrywise difference of two real matrices.
pub fn max_abs_diff<T: Real>(a: &Mat5<T>, b: &Mat5<T>) -> T {
    let mut m = T::zero();
    for i in 0..5 {
        for j in 0..5 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Frobenius norm of a complex matrix.
pub fn cfrobenius<T: Real>(a: &Mat5<Cx<T>>) -> T {
    a.iter().flat_map(|r| r.iter()).map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Inverse of a real 5×5 matrix by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` when a pivot falls below `eps · max|a|`.
pub fn invert5<T: Real>(a: &Mat5<T>) -> Option<Mat5<T>> {
    let scale = max_abs(a);
    if scale == T::zero() {
        return None;
    }
    let tiny = T::epsilon() * T::lit(16.0) * scale;
    let mut m = *a;
    let mut inv = identity5::<T>();
    for col in 0..5 {
        let mut piv = col;
        for r in col + 1..5 {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() <= tiny {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for j in 0..5 {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..5 {
            if r != col {
                let f = m[r][col];
                if f != T::zero() {
                    for j in 0..5 {
                        m[r][j] -= f * m[col][j];
                        inv[r][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Determinant of a square complex matrix by LU factorization with partial
/// pivoting.
pub fn cdet<T: Real>(a: &[Vec<Cx<T>>]) -> Cx<T> {
    let n = a.len();
    let mut m: Vec<Vec<Cx<T>>> = a.to_vec();
    let mut det = Cx::new(T::one(), T::zero());
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].norm() > m[piv][col].norm() {
                piv = r;
            }
        }
        if m[piv][col].norm() == T::zero() {
            return Cx::new(T::zero(), T::zero());
        }
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let d = m[col][col];
        det *= d;
        for r in col + 1..n {
            let f = m[r][col] / d;
            for j in col..n {
                let v = m[col][j];
                m[r][j] -= f * v;
            }
        }
    }
    det
}

/// Solves the square complex system `a x = b` by Gaussian elimination with
/// partial pivoting. Returns `None` for an exactly singular pivot.
pub fn csolve<T: Real>(a: &[Vec<Cx<T>>], b: &[Cx<T>]) -> Option<Vec<Cx<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<Cx<T>>> = a
        .iter()
        .zip(b)
        .map(|(r, &v)| {
            let mut r = r.clone();
            r.push(v);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap_or(std::cmp::Ordering::Equal))?;
        if m[piv][col].norm() == T::zero() {
            return None;
        }
        m.swap(col, piv);
        let d = m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / d;
            for j in col..=n {
                let v = m[col][j];
                m[r][j] -= f * v;
            }
        }
    }
    let mut x = vec![Cx::new(T::zero(), T::zero()); n];
    for i in (0..n).rev() {
        let mut s = m[i][n];
        for j in i + 1..n {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Singular values of a complex `rows × cols` matrix (descending), computed
/// with one-sided Jacobi rotations on the columns.
pub fn singular_values<T: Real>(a: &[Vec<Cx<T>>]) -> Vec<T> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    // Column-major working copy.
    let mut c: Vec<Vec<Cx<T>>> = (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect();
    let zero = Cx::new(T::zero(), T::zero());
    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: T = c[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = c[q].iter().map(|z| z.norm_sqr()).sum();
                let mut gamma = zero;
                for i in 0..rows {
                    gamma += c[p][i].conj() * c[q][i];
                }
                let g = gamma.norm();
                if g == T::zero() || g <= T::epsilon() * (alpha * beta).sqrt() {
                    continue;
                }
                off = off.max(g / (alpha * beta).sqrt());
                let phase = gamma / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let ap = c[p][i];
                    let aq = c[q][i] * phase.conj();
                    c[p][i] = ap * cs - aq * sn;
                    c[q][i] = (ap * sn + aq * cs) * phase;
                }
            }
        }
        if off <= T::epsilon() {
            break;
        }
    }
    let mut s: Vec<T> = c.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Numeric rank: number of singular values above `rel_tol · σ_max`.
pub fn numeric_rank<T: Real>(a: &[Vec<Cx<T>>], rel_tol: T) -> usize {
    let s = singular_values(a);
    match s.first() {
        Some(&smax) if smax > T::zero() => s.iter().filter(|&&v| v > rel_tol * smax).count(),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn invert_identity_and_permutation() {
        let id = identity5::<f64>();
        assert_eq!(invert5(&id).unwrap(), id);
        let mut p = zeros5::<f64>();
        for i in 0..5 {
            p[i][(i + 2) % 5] = 2.0;
        }
        let inv = invert5(&p).unwrap();
        assert!(max_abs_diff(&mat_mul(&p, &inv), &id) < 1e-15);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let mut m = identity5::<f64>();
        m[3] = m[2];
        assert!(invert5(&m).is_none());
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a: Vec<Vec<Cx<f64>>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Complex::new(0.0, (i + 1) as f64) } else { Complex::new(0.0, 0.0) })
                    .collect()
            })
            .collect();
        let s = singular_values(&a);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14);
        assert_eq!(numeric_rank(&a, 1e-8), 3);
    }

    #[test]
    fn determinant_of_triangular() {
        let a: Vec<Vec<Cx<f64>>> = vec![
            vec![Complex::new(2.0, 0.0), Complex::new(5.0, 1.0)],
            vec![Complex::new(0.0, 0.0), Complex::new(0.0, 3.0)],
        ];
        let d = cdet(&a);
        assert!((d - Complex::new(0.0, 6.0)).norm() < 1e-15);
    }
}
