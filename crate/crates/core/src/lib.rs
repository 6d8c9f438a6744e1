//! Angled 2-complexes: links, curvature, the weight test, collapses,
//! homotopy invariants, straight paths and angle assignment.

pub mod a2c;
pub mod angle;
pub mod angle_solver;
pub mod builders;
pub mod collapse;
pub mod complex;
pub mod curvature;
pub mod error;
pub mod fuzz;
pub mod geometry;
pub mod homotopy;
pub mod link;
pub mod lp;
pub mod scalar;
pub mod validate;

use num_rational::{BigRational, Rational64};

pub use angle::AngleOf;
pub use complex::{Complex2, ComplexBuilder};
pub use error::Error;
pub use validate::validate;

/// Angle stored exactly as a rational multiple of π.
pub type Angle = AngleOf<Rational64>;
/// Unbounded-precision angle, used where witnesses are built from floats.
pub type ExactAngle = AngleOf<BigRational>;
pub type LinkGraph = link::Link<Rational64>;
pub type ExactLinkGraph = link::Link<BigRational>;
pub type Realization = geometry::PolygonRealization<f64>;
