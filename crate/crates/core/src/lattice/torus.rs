use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::snf::smith_normal_form;
use super::weights::WeightList;
use crate::algebra::{linalg, Cyclotomic};
use crate::{Error, Result};

/// A point `s` of the torus `Hom(Z^d, U(1))`, stored as rational coordinates
/// in `[0,1)^d`; `s^λ = e^{2πi⟨coords, λ⟩}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
    order: u64,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl TorusPoint {
    /// Reduces the coordinates modulo 1.
    pub fn new(coords: Vec<BigRational>) -> Self {
        let coords: Vec<BigRational> = coords.iter().map(frac).collect();
        let order = coords
            .iter()
            .map(|c| c.denom().to_u64().expect("torus point order fits in u64"))
            .fold(1u64, |acc, d| acc.lcm(&d));
        Self { coords, order }
    }

    pub fn identity(dim: usize) -> Self {
        Self { coords: vec![BigRational::zero(); dim], order: 1 }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Smallest `n` with `n·coords ∈ Z^d`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.coords.iter().map(|c| -c.clone()).collect())
    }

    /// Exponent `e` with `s^λ = ζ_order^e`, reduced to `[0, order)`.
    pub fn exponent(&self, lambda: &[i64]) -> i64 {
        let pairing = WeightList::pair(lambda, &self.coords) * BigRational::from_integer(self.order.into());
        debug_assert!(pairing.is_integer());
        let n = self.order as i64;
        (pairing.to_integer() % num_bigint::BigInt::from(n))
            .to_i64()
            .unwrap()
            .rem_euclid(n)
    }

    /// The root of unity `s^λ` in `Q(ζ_order)`.
    pub fn character(&self, lambda: &[i64]) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.exponent(lambda))
    }

    pub fn fixes(&self, alpha: &[i64]) -> bool {
        WeightList::pair(alpha, &self.coords).is_integer()
    }

    /// Indices of `Φ_s = [α ∈ Φ : s^α = 1]`.
    pub fn fixed_indices(&self, phi: &WeightList) -> Vec<usize> {
        (0..phi.len()).filter(|&i| self.fixes(&phi.vectors()[i])).collect()
    }

    /// `Φ_s` as a weight list together with the indices of `Φ ∖ Φ_s`.
    pub fn split(&self, phi: &WeightList) -> Result<(WeightList, Vec<usize>)> {
        let fixed = self.fixed_indices(phi);
        let moved = (0..phi.len()).filter(|i| !fixed.contains(i)).collect();
        Ok((phi.sublist(&fixed)?, moved))
    }
}

/// All `s ∈ T` for which `Φ_s` still spans, sorted lexicographically.
///
/// Each basis `B ⊆ Φ` contributes the `|det B|` solutions of
/// `⟨s, α⟩ ∈ Z (α ∈ B)`, read off from the Smith form of `B`.
pub fn vertex_set(phi: &WeightList) -> Result<Vec<TorusPoint>> {
    phi.require_spanning()?;
    let dim = phi.dim();
    let mut found = BTreeSet::new();
    for (idx, _) in phi.bases() {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| phi.vectors()[i].clone()).collect();
        let snf = smith_normal_form(&rows);
        // A s ∈ Z^d  ⇔  D (V⁻¹ s) ∈ Z^d, so s = V w with w_i ∈ (1/d_i) Z.
        let diag: Vec<i64> = (0..dim).map(|i| snf.d[i][i]).collect();
        let mut counters = vec![0i64; dim];
        loop {
            let w: Vec<BigRational> =
                counters.iter().zip(&diag).map(|(&k, &di)| BigRational::new(k.into(), di.into())).collect();
            let s: Vec<BigRational> = (0..dim)
                .map(|i| {
                    (0..dim).fold(BigRational::zero(), |acc, j| {
                        acc + &w[j] * BigRational::from_integer(snf.v[i][j].into())
                    })
                })
                .collect();
            found.insert(TorusPoint::new(s));
            // odometer over Π [0, d_i)
            let mut pos = 0;
            loop {
                if pos == dim {
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < diag[pos] {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
            if pos == dim {
                break;
            }
        }
    }
    Ok(found
        .into_iter()
        .filter(|s| {
            let fixed: Vec<Vec<i64>> = s.fixed_indices(phi).iter().map(|&i| phi.vectors()[i].clone()).collect();
            linalg::rank_int(&fixed) == dim
        })
        .collect())
}

/// Least common multiple of the vertex orders: the common cyclotomic field.
pub fn common_order(vertices: &[TorusPoint]) -> u64 {
    vertices.iter().fold(1u64, |acc, s| acc.lcm(&s.order()))
}

pub fn require_vertex(s: &TorusPoint, phi: &WeightList) -> Result<()> {
    if s.coords().len() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: s.coords().len() });
    }
    let fixed: Vec<Vec<i64>> = s.fixed_indices(phi).iter().map(|&i| phi.vectors()[i].clone()).collect();
    if linalg::rank_int(&fixed) == phi.dim() {
        Ok(())
    } else {
        Err(Error::NotAVertex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    #[test]
    fn vertex_examples() {
        let courant = WeightList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(vertex_set(&courant).unwrap(), vec![TorusPoint::identity(2)]);

        let phi12 = WeightList::new(1, vec![vec![1], vec![2]]).unwrap();
        let v = vertex_set(&phi12).unwrap();
        assert_eq!(v, vec![TorusPoint::identity(1), TorusPoint::new(vec![rational(1, 2)])]);
        assert_eq!(v[1].character(&[1]).as_rational(), Some(rational(-1, 1)));
        assert_eq!(v[1].fixed_indices(&phi12), vec![1]);
    }

    #[test]
    fn a2_weight_coordinates_have_order_three_vertices() {
        let phi = WeightList::new(2, vec![vec![2, -1], vec![-1, 2], vec![1, 1]]).unwrap();
        let v = vertex_set(&phi).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(common_order(&v), 3);
        for s in &v {
            assert_eq!(s.fixed_indices(&phi).len(), 3);
        }
    }

    #[test]
    fn non_vertex_rejected() {
        let phi12 = WeightList::new(1, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(require_vertex(&TorusPoint::new(vec![rational(1, 3)]), &phi12), Err(Error::NotAVertex));
    }
}
