//! Scalar abstractions.
//!
//! Combinatorial quantities (angles, link lengths, curvature) live over an
//! exact ordered field, while polygon realizations and path tracing use a
//! floating-point type. Both are expressed as traits over `num-traits` so the
//! algorithms are written once.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// An exact ordered field used for angle arithmetic.
pub trait Exact:
    Clone + Ord + Hash + Debug + Display + Signed + ToPrimitive + Send + Sync + 'static
{
    /// `numer / denom`; panics when `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Converts a float into this field. Exact for `BigRational`,
    /// a best rational approximation for fixed-width rationals.
    fn from_f64(value: f64) -> Option<Self>;

    fn to_big(&self) -> BigRational;

    fn from_big(value: &BigRational) -> Option<Self>;

    /// Numerator and denominator of the reduced fraction, as decimal strings.
    fn parts(&self) -> (String, String);
}

impl Exact for Rational64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational64::new(numer, denom)
    }

    fn from_f64(value: f64) -> Option<Self> {
        Rational64::approximate_float(value)
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_big(value: &BigRational) -> Option<Self> {
        let numer = value.numer().to_i64()?;
        let denom = value.denom().to_i64()?;
        Some(Rational64::new(numer, denom))
    }

    fn parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

impl Exact for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value)
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }

    fn from_big(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }

    fn parts(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

/// Floating-point scalar for planar geometry.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + serde::Serialize + Send + Sync + 'static
{
    /// Relative tolerance for polygon closure and vertex snapping.
    fn tolerance() -> Self;

    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("float literal")
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-4
    }
}
