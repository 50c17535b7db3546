//! Finite-difference stencils: fourth-order central first derivatives with
//! fourth-order one-sided closures, and explicit low-pass filters of order
//! 2, 4, 6 and 8.

/// One node's state (ρ′, u′, v′, w′, p′).
pub type State = [f64; 5];

/// Fourth-order central first derivative weights for offsets −2..=2.
pub const CENTRAL4: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

/// One-sided weights at the first node, offsets 0..=4.
pub const EDGE0: [f64; 5] = [-25.0 / 12.0, 48.0 / 12.0, -36.0 / 12.0, 16.0 / 12.0, -3.0 / 12.0];

/// Biased weights at the second node, offsets −1..=3.
pub const EDGE1: [f64; 5] = [-3.0 / 12.0, -10.0 / 12.0, 18.0 / 12.0, -6.0 / 12.0, 1.0 / 12.0];

/// Filter stencil of order 2n: binomial(2n, n + j)·(−1)ʲ / 2²ⁿ for
/// j = −n..=n. Subtracting σ times this from the field damps the
/// odd-even mode by exactly σ and leaves constants untouched.
pub fn filter_weights(n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut binom = vec![1.0f64; m + 1];
    for k in 1..=m {
        binom[k] = binom[k - 1] * (m + 1 - k) as f64 / k as f64;
    }
    let scale = (1u64 << m) as f64;
    (0..=m)
        .map(|idx| {
            let j = idx as isize - n as isize;
            let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sign * binom[idx] / scale
        })
        .collect()
}

/// Filter half-width available at index `i` of a non-periodic line of `n`
/// nodes: 4 in the interior, shrinking towards the ends, 0 at the ends.
#[inline]
pub fn filter_halfwidth(i: usize, n: usize) -> usize {
    i.min(n - 1 - i).min(4)
}

#[inline]
pub(crate) fn axpy(acc: &mut State, w: f64, q: &State) {
    for c in 0..5 {
        acc[c] += w * q[c];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_weights_are_exact_on_quartics() {
        for p in 0..=4 {
            let f = |x: f64| x.powi(p);
            let dfdx = |x: f64| if p == 0 { 0.0 } else { p as f64 * x.powi(p - 1) };
            let c: f64 = (0..5).map(|j| CENTRAL4[j] * f(j as f64 - 2.0)).sum();
            let e0: f64 = (0..5).map(|j| EDGE0[j] * f(j as f64)).sum();
            let e1: f64 = (0..5).map(|j| EDGE1[j] * f(j as f64 - 1.0)).sum();
            assert!((c - dfdx(0.0)).abs() < 1e-13);
            assert!((e0 - dfdx(0.0)).abs() < 1e-13);
            assert!((e1 - dfdx(0.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn filter_damps_odd_even_mode_by_one() {
        for n in 1..=4 {
            let w = filter_weights(n);
            let nyq: f64 = w.iter().enumerate().map(|(i, c)| c * if (i + n) % 2 == 0 { 1.0 } else { -1.0 }).sum();
            assert!((nyq - 1.0).abs() < 1e-15, "order {n}: {nyq}");
            assert!(w.iter().sum::<f64>().abs() < 1e-15);
        }
        assert_eq!(filter_weights(4)[4], 70.0 / 256.0);
    }
}
