//! Scalar abstractions shared by the numeric and the exact layers.
//!
//! The elliptic engine is generic over a real floating type [`Real`]
//! (`f32`/`f64`); polynomial, jet and KLR arithmetic is generic over a
//! coefficient ring [`Scalar`], instantiated with exact rationals for the
//! relation suites and with complex floats for transported operators.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};

/// Real floating-point type driving the elliptic numerics.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Widening conversion used for reports and serialization.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Coefficient ring for polynomials, jets and KLR vectors.
///
/// Division is only ever used by a unit (constant-term inversion or a
/// numeric constant); exact rationals keep every relation check exact.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Magnitude used for tolerance comparisons and reporting.
    fn magnitude(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn magnitude(&self) -> f64 {
        (*self.numer() as f64 / *self.denom() as f64).abs()
    }
}

impl<R: Real> Scalar for Complex<R> {
    fn from_i64(v: i64) -> Self {
        Complex::new(R::from_i64(v).expect("integer representable"), R::zero())
    }

    fn inv(&self) -> Option<Self> {
        if self.norm_sqr().is_zero() {
            None
        } else {
            Some(Complex::<R>::one() / *self)
        }
    }

    fn magnitude(&self) -> f64 {
        self.norm().to_f64_lossy()
    }
}

/// Composite comparison tolerance: absolute floor plus relative slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<R> {
    pub abs: R,
    pub rel: R,
}

impl<R: Real> Tolerance<R> {
    pub fn new(abs: R, rel: R) -> Self {
        Self { abs, rel }
    }

    /// Admissible error for a quantity whose evaluation scale is `scale`.
    pub fn bound(&self, scale: R) -> R {
        self.abs.max(self.rel * scale)
    }

    pub fn accepts(&self, err: R, scale: R) -> bool {
        err <= self.bound(scale)
    }
}

/// Complex number from two `f64` parts.
pub fn cplx<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::lit(re), R::lit(im))
}
