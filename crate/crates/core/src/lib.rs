//! Exact box-spline calculus and Dahmen–Micchelli deconvolution.
//!
//! The crate evaluates centered box splines with exact rational arithmetic,
//! recovers their alcove-local polynomial pieces, builds the Todd-type
//! operator series attached to each vertex of the toric arrangement, and
//! inverts the convolution `m ↦ (Σ m(λ) δ_λ) * B_c(Φ)` pointwise. The `rep`
//! module uses this to recover branching multiplicities of compact groups
//! from their piecewise-polynomial Duistermaat–Heckman measures and checks
//! them against character-theoretic oracles.
//!
//! All polynomial and series code is generic over [`Field`]; the two
//! instantiations used throughout are [`Rational`] and [`Cyclotomic`].

pub mod algebra;
pub mod boxspline;
pub mod cli;
pub mod dm;
mod error;
pub mod lattice;
pub mod rep;

pub use algebra::{Cyclotomic, Field, MultiPoly, TruncatedSeries};
pub use error::{Error, Result};

/// Arbitrary-precision rational, the base scalar of the engine.
pub type Rational = num_rational::BigRational;

pub type RationalPoly = MultiPoly<Rational>;
pub type CyclotomicPoly = MultiPoly<Cyclotomic>;
pub type RationalSeries = TruncatedSeries<Rational>;
pub type CyclotomicSeries = TruncatedSeries<Cyclotomic>;
