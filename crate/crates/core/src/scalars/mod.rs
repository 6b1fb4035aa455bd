//! Exact coefficients and truncated power-series calculus.

mod series;
mod tau;

pub use series::{modified_todd_series, todd_series, CharSeries, SeriesFn, SeriesOp};
pub use tau::{sign, TauScalar};

/// Arbitrary-precision rational number.
pub type Rational = num::BigRational;
