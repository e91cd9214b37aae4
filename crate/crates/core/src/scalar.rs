//! Numeric substrate: exact rationals or binary64 with a comparison tolerance.

use core::fmt::{Debug, Display};
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Relative tolerance used by floating point comparisons. Exact scalars
/// ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-9)
    }
}

/// Field element used for every jet coordinate.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic and equality are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact test against zero.
    fn is_zero(&self) -> bool;

    /// Absolute value as a float, for pivoting and reporting.
    fn magnitude(&self) -> f64;

    /// Exact equality for exact scalars; otherwise
    /// `|a - b| <= tol * max(1, |a|, |b|)`.
    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool;

    /// Zero test relative to `scale`: exact scalars compare with zero,
    /// floats with `tol * max(1, scale)`.
    fn is_negligible(&self, scale: f64, tol: Tolerance) -> bool;

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol.0 * scale
    }

    fn is_negligible(&self, scale: f64, tol: Tolerance) -> bool {
        self.abs() <= tol.0 * scale.max(1.0)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        num_traits::One::one()
    }

    fn from_i64(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn approx_eq(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }

    fn is_negligible(&self, _scale: f64, _tol: Tolerance) -> bool {
        Zero::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_comparison_is_relative() {
        let tol = Tolerance::default();
        assert!(1e12f64.approx_eq(&(1e12 + 1.0), tol));
        assert!(!1.0f64.approx_eq(&1.001, tol));
        assert!(1e-12f64.approx_eq(&0.0, tol));
    }

    #[test]
    fn rational_is_exact() {
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(2, 6);
        assert_eq!(a, b);
        assert!(!Rational::from_ratio(1, 3).approx_eq(&Rational::from_ratio(1, 4), Tolerance(1.0)));
        assert_eq!(
            Rational::from_ratio(1, 2).pow(3),
            Rational::from_ratio(1, 8)
        );
    }
}
