//! Scalar abstraction shared by every module.
//!
//! All algebra is written against [`Real`], which is implemented for `f32`
//! and `f64`. Complex quantities use [`num_complex::Complex`] over the same
//! scalar.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar type used by the library.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Relative tolerance for internal dual-construction checks.
    fn check_tol() -> Self;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion to `f64` for reporting and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn check_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    #[inline]
    fn check_tol() -> Self {
        2e-4
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

/// Row or column 5-vector.
pub type Vec5<T> = [T; 5];

/// Dense 5×5 matrix stored row-major.
pub type Mat5<T> = [[T; 5]; 5];

/// Promotes a real value to a complex one with zero imaginary part.
#[inline]
pub fn cx<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Promotes a real 5-vector to complex.
#[inline]
pub fn cx5<T: Real>(v: &Vec5<T>) -> Vec5<Cx<T>> {
    [cx(v[0]), cx(v[1]), cx(v[2]), cx(v[3]), cx(v[4])]
}
