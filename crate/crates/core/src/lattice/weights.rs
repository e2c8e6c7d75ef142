use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;

use super::walls::{compute_wall_families, AffineWallFamily};
use crate::algebra::linalg;
use crate::{Error, Result};

/// The list `Φ = [α_1, …, α_N]` of nonzero vectors in the lattice `Z^d`.
#[derive(Clone, Debug)]
pub struct WeightList {
    dim: usize,
    vectors: Vec<Vec<i64>>,
    rho: Vec<BigRational>,
    spanning: bool,
    families: OnceLock<Arc<Vec<AffineWallFamily>>>,
}

impl PartialEq for WeightList {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vectors == other.vectors
    }
}

impl Eq for WeightList {}

impl WeightList {
    pub fn new(dim: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::ZeroVector);
            }
        }
        let rho = (0..dim)
            .map(|i| BigRational::new(vectors.iter().map(|v| v[i]).sum::<i64>().into(), 2.into()))
            .collect();
        let spanning = linalg::rank_int(&vectors) == dim;
        Ok(Self { dim, vectors, rho, spanning, families: OnceLock::new() })
    }

    /// Like [`WeightList::new`] but fails unless the list spans `Q^d`.
    pub fn spanning(dim: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        let list = Self::new(dim, vectors)?;
        if !list.spanning {
            return Err(Error::NotSpanning);
        }
        Ok(list)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// `ρ_Φ = ½ Σ α`.
    pub fn rho(&self) -> &[BigRational] {
        &self.rho
    }

    pub fn spans(&self) -> bool {
        self.spanning
    }

    pub fn require_spanning(&self) -> Result<()> {
        if self.spanning {
            Ok(())
        } else {
            Err(Error::NotSpanning)
        }
    }

    /// `N - d`, the degree bound of local box-spline pieces.
    pub fn degree_bound(&self) -> usize {
        self.vectors.len().saturating_sub(self.dim)
    }

    pub fn sublist(&self, indices: &[usize]) -> Result<Self> {
        Self::new(self.dim, indices.iter().map(|&i| self.vectors[i].clone()).collect())
    }

    /// Copy with `α_i` replaced by `-α_i`.
    pub fn with_negated(&self, i: usize) -> Self {
        let mut vectors = self.vectors.clone();
        vectors[i] = vectors[i].iter().map(|x| -x).collect();
        Self::new(self.dim, vectors).expect("negation keeps the list valid")
    }

    /// Index sets of the bases of `Q^d` contained in `Φ`, with `|det|`.
    pub fn bases(&self) -> Vec<(Vec<usize>, i64)> {
        (0..self.vectors.len())
            .combinations(self.dim)
            .filter_map(|idx| {
                let m: Vec<Vec<i64>> = idx.iter().map(|&i| self.vectors[i].clone()).collect();
                let det = linalg::abs_det_int(&m);
                (det != 0).then_some((idx, det))
            })
            .collect()
    }

    /// Every basis contained in `Φ` is a lattice basis.
    pub fn is_unimodular(&self) -> bool {
        self.spanning && self.bases().iter().all(|(_, det)| *det == 1)
    }

    /// Wall families of the arrangement `ρ_Φ + Λ + U`, computed once.
    pub fn wall_families(&self) -> Result<Arc<Vec<AffineWallFamily>>> {
        self.require_spanning()?;
        Ok(self.families.get_or_init(|| Arc::new(compute_wall_families(self))).clone())
    }

    /// Half-widths `½ Σ |α_i|` of the bounding box of the centered zonotope.
    pub fn zonotope_radius(&self) -> Vec<BigRational> {
        (0..self.dim)
            .map(|i| BigRational::new(self.vectors.iter().map(|v| v[i].abs()).sum::<i64>().into(), 2.into()))
            .collect()
    }

    /// Pairing `⟨u, x⟩` of an integer covector with a rational point.
    pub fn pair(u: &[i64], x: &[BigRational]) -> BigRational {
        u.iter()
            .zip(x)
            .filter(|(a, _)| **a != 0)
            .fold(BigRational::zero(), |acc, (a, b)| acc + b * BigRational::from_integer((*a).into()))
    }
}
