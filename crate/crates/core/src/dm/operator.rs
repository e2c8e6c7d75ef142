use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{ahat_factor_series, apply_operator_product, e_factor_series, Cyclotomic, MultiPoly, TruncatedSeries};
use crate::lattice::{require_vertex, TorusPoint, WeightList};
use crate::Result;

/// `Â(s,Φ) = E(s,Φ) Â(Φ_s)` as a product of one-variable series in
/// directional derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexOperator {
    pub vertex: TorusPoint,
    /// One `Â` factor per element of `Φ_s`, then one `E` factor per element of `Φ ∖ Φ_s`.
    pub factors: Vec<(TruncatedSeries<Cyclotomic>, Vec<i64>)>,
}

impl VertexOperator {
    pub fn apply(&self, p: &MultiPoly<Cyclotomic>) -> Result<MultiPoly<Cyclotomic>> {
        apply_operator_product(&self.factors, p)
    }
}

/// Builds `Â(s,Φ)` truncated at `N - d`, the degree of every local piece.
pub fn build_vertex_operator(s: &TorusPoint, phi: &WeightList) -> Result<VertexOperator> {
    require_vertex(s, phi)?;
    let order = phi.degree_bound();
    let ahat = ahat_factor_series(order).map(|q: &BigRational| Cyclotomic::from_rational_in(1, q.clone()));
    let fixed = s.fixed_indices(phi);
    let mut factors = Vec::with_capacity(phi.len());
    for &i in &fixed {
        factors.push((ahat.clone(), phi.vectors()[i].clone()));
    }
    for (i, alpha) in phi.vectors().iter().enumerate() {
        if fixed.contains(&i) {
            continue;
        }
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        let c = s.character(&neg);
        debug_assert!(c != Cyclotomic::one());
        factors.push((e_factor_series(&c, order)?, alpha.clone()));
    }
    Ok(VertexOperator { vertex: s.clone(), factors })
}
