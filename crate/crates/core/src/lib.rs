//! Exact certification of sufficient conditions for faithful realizability
//! of embedded tropical curves.
//!
//! All arithmetic is over arbitrary-precision integers and rationals.

pub mod abundancy;
pub mod certify;
pub mod curve;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod json;
pub mod lattice;
pub mod special_fiber;

pub use certify::{certify_realizability, Certificate, Verdict};
pub use curve::{Incidence, MetricGraph, TropicalCurve, ValidationReport};
pub use error::{Error, Result};
pub use lattice::{IntMatrix, LatticeVector, Rat, RatMatrix, RatVector};
