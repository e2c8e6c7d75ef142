//! Exact scalars, truncated power series and multivariate polynomials.

mod cyclotomic;
mod field;
pub mod linalg;
mod poly;
mod series;

pub use cyclotomic::{cyclotomic_embed, cyclotomic_polynomial, Cyclotomic};
pub use field::{integer, parse_rational, rational, Field};
pub use poly::{apply_operator_product, monomials_up_to, Exponent, MultiPoly};
pub use series::{ahat_factor_series, e_factor_series, TruncatedSeries};
