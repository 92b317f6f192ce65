//! Exact second-order free probability.

pub mod annular;
pub mod cumulants;
pub mod dist;
pub mod error;
pub mod examples;
pub mod perm;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use num_rational::BigRational as Rational;
