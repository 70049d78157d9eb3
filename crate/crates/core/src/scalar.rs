//! Scalar abstraction shared by the series and numeric engines.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Zero};

/// A field element usable as a series coefficient.
///
/// Implemented for `f32`, `f64`, [`BigRational`] and `Complex<T>` over any of
/// those, which covers both the exact and the floating-point paths.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_bigint(n: &BigInt) -> Self;
}

/// A scalar with an ordering, i.e. a legal real part of a complex scalar.
pub trait RealScalar: Scalar + PartialOrd {}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_bigint(n: &BigInt) -> Self {
        num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN)
    }
}
impl RealScalar for f64 {}

impl Scalar for f32 {
    fn from_i64(n: i64) -> Self {
        n as f32
    }
    fn from_bigint(n: &BigInt) -> Self {
        num_traits::ToPrimitive::to_f32(n).unwrap_or(f32::NAN)
    }
}
impl RealScalar for f32 {}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}
impl RealScalar for BigRational {}

impl<T: RealScalar> Scalar for Complex<T> {
    fn from_i64(n: i64) -> Self {
        Complex::new(T::from_i64(n), T::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(T::from_ratio(num, den), T::zero())
    }
    fn from_bigint(n: &BigInt) -> Self {
        Complex::new(T::from_bigint(n), T::zero())
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}

/// Shorthand for an exact integer as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_i64(n)
}

/// Imaginary unit of a complex scalar.
pub fn imag_unit<T: RealScalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Collapses a Gaussian rational to its real part, failing loudly if the
/// imaginary part survived.
pub fn into_real(z: Complex<BigRational>, what: &str) -> crate::Result<BigRational> {
    if !z.im.is_zero() {
        return Err(crate::Error::Internal(format!(
            "{what}: expected a real value, found imaginary part {}",
            z.im
        )));
    }
    Ok(z.re)
}
