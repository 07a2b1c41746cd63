//! Exact spectral data for pairs of commuting ordinary differential operators.
//!
//! The crate covers both directions of the correspondence between rank-one
//! commutative algebras of differential operators and their spectral curves:
//!
//! * [`series`] and [`diffop`]: exact truncated power series and the operator
//!   algebra built on them.
//! * [`spectral`]: the action matrix, the Burchnall–Chaundy curve, normalized
//!   eigenvectors and the spectral divisor.
//! * [`semigroup`]: the numerical semigroup of orders.
//! * [`inverse`]: explicit Baker–Akhiezer functions for rational spectral curves.
//! * [`pairs`]: the commuting pairs used throughout the tests.

pub mod bivar;
pub mod diffop;
pub mod error;
pub mod inverse;
pub mod pairs;
pub mod ring;
pub mod scalar;
pub mod semigroup;
pub mod series;
pub mod spectral;
pub mod upoly;

pub use bivar::BivarPoly;
pub use diffop::{poly_eval, CommuteVerdict, DiffOp, GaugeData, OrderInfo, PolyEval};
pub use error::{Error, Result};
pub use scalar::{ComplexFloat, ExactScalar};
pub use inverse::{CurveKind, GenusZeroSpec};
pub use semigroup::{Gaps, NumericalSemigroup};
pub use series::{Elementary, TaylorSeries};
pub use spectral::{spectrum, ActionMatrix, DivisorPoint, DivisorTolerances, LambdaPoly, PlaneCurve, PolyMatrix};
pub use upoly::UPoly;
