//! Scalar abstractions the numerical core is generic over.
//!
//! [`Real`] covers `f32` and `f64`. [`Field`] additionally covers
//! `Complex<f32>` and `Complex<f64>`, which the disk kernel needs; jets and
//! truncated Taylor numbers are generic over a `Field`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite `f64` values at all, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A field of coefficients: a [`Real`] or a complex number over one.
pub trait Field:
    Copy + NumAssign + Neg<Output = Self> + Sum + Debug + Default + Send + Sync + 'static
{
    type Real: Real;

    fn from_real(r: Self::Real) -> Self;

    /// Absolute value (real) or modulus (complex).
    fn modulus(self) -> Self::Real;

    /// Principal-branch power.
    fn powf(self, p: Self::Real) -> Self;

    fn exp(self) -> Self;

    fn is_finite(self) -> bool;
}

impl<T: Real> Field for T {
    type Real = T;

    #[inline]
    fn from_real(r: T) -> Self {
        r
    }

    #[inline]
    fn modulus(self) -> T {
        self.abs()
    }

    #[inline]
    fn powf(self, p: T) -> Self {
        Float::powf(self, p)
    }

    #[inline]
    fn exp(self) -> Self {
        Float::exp(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
}

impl<T: Real> Field for Complex<T> {
    type Real = T;

    #[inline]
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }

    #[inline]
    fn modulus(self) -> T {
        self.norm()
    }

    #[inline]
    fn powf(self, p: T) -> Self {
        // num-complex takes the argument in (-pi, pi]: the principal branch.
        Complex::powf(self, p)
    }

    #[inline]
    fn exp(self) -> Self {
        Complex::exp(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_power_uses_principal_branch() {
        let z = Complex::new(-1.0_f64, 1e-300);
        let r = Field::powf(z, 0.5);
        assert!((r - Complex::new(0.0, 1.0)).norm() < 1e-12);
        let w = Complex::new(-1.0_f64, -1e-300);
        let s = Field::powf(w, 0.5);
        assert!((s - Complex::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn real_and_complex_modulus_agree_on_reals() {
        assert_eq!(Field::modulus(-3.5_f64), 3.5);
        assert_eq!(Field::modulus(Complex::new(-3.5_f64, 0.0)), 3.5);
    }
}
