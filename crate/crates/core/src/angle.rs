//! Exact angles measured in multiples of π.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;


use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Exact;

/// An angle (or length, or curvature) equal to `value · π`, stored exactly.
///
/// Corner angles, link arc lengths, girths and curvatures all share this type,
/// so every comparison against π or 2π is exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AngleOf<T>(T);

impl<T: Exact> AngleOf<T> {
    /// The angle `(numer / denom) · π`.
    pub fn new(numer: i64, denom: i64) -> Self {
        AngleOf(T::from_ratio(numer, denom))
    }

    pub fn from_multiple(multiple: T) -> Self {
        AngleOf(multiple)
    }

    pub fn zero() -> Self {
        AngleOf(T::zero())
    }

    pub fn pi() -> Self {
        AngleOf(T::one())
    }

    pub fn two_pi() -> Self {
        AngleOf(T::from_ratio(2, 1))
    }

    /// `(n - 2) · π`, the angle sum of an `n`-gon.
    pub fn polygon_sum(n: usize) -> Self {
        AngleOf(T::from_ratio(n as i64 - 2, 1))
    }

    /// The coefficient of π.
    pub fn multiple(&self) -> &T {
        &self.0
    }

    pub fn into_multiple(self) -> T {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        AngleOf(self.0.abs())
    }

    /// Multiplies by the rational `numer / denom`.
    pub fn scale(&self, numer: i64, denom: i64) -> Self {
        AngleOf(self.0.clone() * T::from_ratio(numer, denom))
    }

    pub fn half(&self) -> Self {
        self.scale(1, 2)
    }

    /// Value in radians, for geometry.
    pub fn to_radians(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
    }

    /// Value as a float multiple of π.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts into another exact field.
    pub fn convert<U: Exact>(&self) -> Option<AngleOf<U>> {
        U::from_big(&self.0.to_big()).map(AngleOf)
    }

    /// `p/q` text form (meaning `(p/q)·π`) used by the A2C format and JSON.
    pub fn to_ratio_string(&self) -> String {
        let (n, d) = self.0.parts();
        if d == "1" {
            n
        } else {
            format!("{n}/{d}")
        }
    }
}

impl<T: Exact> Default for AngleOf<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Error from parsing an angle token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AngleParseError {
    #[error("decimal angles are not accepted: `{0}`")]
    Decimal(String),
    #[error("malformed angle `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl<T: Exact> FromStr for AngleOf<T> {
    type Err = AngleParseError;

    /// Parses `p/q` or `p` as `(p/q)·π`. Signs are allowed here; positivity is
    /// a property of corners, checked elsewhere.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.contains('.') || s.contains('e') || s.contains('E') {
            return Err(AngleParseError::Decimal(s.to_string()));
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer: i64 = num
            .parse()
            .map_err(|_| AngleParseError::Malformed(s.to_string()))?;
        let denom: i64 = den
            .parse()
            .map_err(|_| AngleParseError::Malformed(s.to_string()))?;
        if denom == 0 {
            return Err(AngleParseError::ZeroDenominator(s.to_string()));
        }
        if denom < 0 {
            return Err(AngleParseError::Malformed(s.to_string()));
        }
        Ok(AngleOf::new(numer, denom))
    }
}

impl<T: Exact> fmt::Display for AngleOf<T> {
    /// Human form, e.g. `3π/4`, `2π`, `-π/3`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        let (n, d) = self.0.parts();
        let (sign, n) = match n.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("", n),
        };
        let n = if n == "1" { String::new() } else { n };
        if d == "1" {
            write!(f, "{sign}{n}π")
        } else {
            write!(f, "{sign}{n}π/{d}")
        }
    }
}

impl<T: Exact> fmt::Debug for AngleOf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({})", self)
    }
}

impl<T: Exact> Add for AngleOf<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        AngleOf(self.0 + rhs.0)
    }
}

impl<'a, T: Exact> Add<&'a AngleOf<T>> for &'a AngleOf<T> {
    type Output = AngleOf<T>;
    fn add(self, rhs: Self) -> AngleOf<T> {
        AngleOf(self.0.clone() + rhs.0.clone())
    }
}

impl<T: Exact> AddAssign for AngleOf<T> {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0.clone() + rhs.0;
    }
}

impl<T: Exact> Sub for AngleOf<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        AngleOf(self.0 - rhs.0)
    }
}

impl<'a, T: Exact> Sub<&'a AngleOf<T>> for &'a AngleOf<T> {
    type Output = AngleOf<T>;
    fn sub(self, rhs: Self) -> AngleOf<T> {
        AngleOf(self.0.clone() - rhs.0.clone())
    }
}

impl<T: Exact> SubAssign for AngleOf<T> {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 = self.0.clone() - rhs.0;
    }
}

impl<T: Exact> Neg for AngleOf<T> {
    type Output = Self;
    fn neg(self) -> Self {
        AngleOf(-self.0)
    }
}

impl<T: Exact> Mul<i64> for AngleOf<T> {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        AngleOf(self.0 * T::from_ratio(rhs, 1))
    }
}

impl<T: Exact> Sum for AngleOf<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, a| acc + a)
    }
}

impl<'a, T: Exact> Sum<&'a AngleOf<T>> for AngleOf<T> {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, a| acc + a.clone())
    }
}

impl<T: Exact> PartialEq<i64> for AngleOf<T> {
    fn eq(&self, other: &i64) -> bool {
        self.0 == T::from_ratio(*other, 1)
    }
}

impl<T: Exact> PartialOrd<i64> for AngleOf<T> {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&T::from_ratio(*other, 1)))
    }
}

impl<T: Exact> Serialize for AngleOf<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_ratio_string())
    }
}

impl<'de, T: Exact> Deserialize<'de> for AngleOf<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
