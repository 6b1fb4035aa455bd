//! Exact computations on the commutative side of the comparison between
//! noncommutative Hodge structures of a smooth projective variety and its
//! classical Hodge data.
//!
//! Everything is modelled on finite-dimensional cohomology rings with exact
//! rational structure constants. A formal symbol `tau` stands for `2*pi*i`,
//! so trace, Chern-character and pairing normalisations stay exact.
//!
//! - [`scalars`]: `tau`-Laurent rationals and truncated power series.
//! - [`cohring`]: bigraded rings, cup product, algebraic/analytic traces.
//! - [`charclass`]: Chern character, Todd-type classes, square roots.
//! - [`ncvshs`]: u-adic lattice elements, the J/K twists, `vee`.
//! - [`pairing`]: higher residue, canonical and Mukai pairings; HRR.
//! - [`family`]: Gauss-Manin u-connections on a formal deformation model.
//! - [`graphs`]: admissible graphs and Monte-Carlo configuration weights.

pub mod charclass;
pub mod cohring;
pub mod error;
pub mod family;
pub mod graphs;
pub mod ncvshs;
pub mod pairing;
pub mod scalars;

pub use error::{Error, Result};
