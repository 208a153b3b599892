//! Scalar abstraction over the base field.
//!
//! All linear algebra in this crate is generic over [`Scalar`], which is
//! implemented for `f32`/`f64` and their complex counterparts. The associated
//! [`Scalar::Real`] type carries norms, singular values and tolerances.
//! Conjugation is the identity on the real types, so code written against
//! this trait computes bilinear (not sesquilinear) expressions like `u^T B v`
//! identically over both fields.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, One, Zero};

/// Element of the base field (real or complex, single or double precision).
pub trait Scalar:
    Copy
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum<Self>
    + Zero
    + One
{
    /// Underlying real field.
    type Real: Float + Debug + Display + Send + Sync + Sum<Self::Real> + 'static;

    /// True for the complex instantiations.
    const COMPLEX: bool;

    fn conj(self) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    /// |z|
    fn modulus(self) -> Self::Real;
    /// |z|^2, cheaper than `modulus` squared.
    fn modulus_sq(self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    /// Multiply by a real factor.
    fn scale(self, r: Self::Real) -> Self;
    fn is_finite_scalar(self) -> bool;

    fn from_f64(x: f64) -> Self {
        Self::from_real(Self::real_from_f64(x))
    }

    fn real_from_f64(x: f64) -> Self::Real {
        num_traits::cast(x).expect("f64 convertible to real type")
    }

    fn real_to_f64(r: Self::Real) -> f64 {
        num_traits::cast(r).expect("real type convertible to f64")
    }
}

macro_rules! impl_real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;

            const COMPLEX: bool = false;

            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn re(self) -> Self::Real {
                self
            }
            #[inline]
            fn im(self) -> Self::Real {
                0.0
            }
            #[inline]
            fn modulus(self) -> Self::Real {
                self.abs()
            }
            #[inline]
            fn modulus_sq(self) -> Self::Real {
                self * self
            }
            #[inline]
            fn from_real(r: Self::Real) -> Self {
                r
            }
            #[inline]
            fn scale(self, r: Self::Real) -> Self {
                self * r
            }
            #[inline]
            fn is_finite_scalar(self) -> bool {
                self.is_finite()
            }
        }
    };
}

macro_rules! impl_complex_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            type Real = $t;

            const COMPLEX: bool = true;

            #[inline]
            fn conj(self) -> Self {
                Complex::conj(&self)
            }
            #[inline]
            fn re(self) -> Self::Real {
                self.re
            }
            #[inline]
            fn im(self) -> Self::Real {
                self.im
            }
            #[inline]
            fn modulus(self) -> Self::Real {
                self.norm()
            }
            #[inline]
            fn modulus_sq(self) -> Self::Real {
                self.norm_sqr()
            }
            #[inline]
            fn from_real(r: Self::Real) -> Self {
                Complex::new(r, 0.0)
            }
            #[inline]
            fn scale(self, r: Self::Real) -> Self {
                Complex::new(self.re * r, self.im * r)
            }
            #[inline]
            fn is_finite_scalar(self) -> bool {
                self.re.is_finite() && self.im.is_finite()
            }
        }
    };
}

impl_real_scalar!(f32);
impl_real_scalar!(f64);
impl_complex_scalar!(f32);
impl_complex_scalar!(f64);
