use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::piece::local_piece;
use crate::algebra::linalg;
use crate::lattice::{alcove_of, default_epsilon, is_regular, WeightList};
use crate::{Error, Result};

struct Basis {
    indices: Vec<usize>,
    /// `inverse[i]` is the row producing the coefficient of `indices[i]`.
    inverse: Vec<Vec<BigRational>>,
    abs_det: BigRational,
}

/// Knock-one-out evaluation of the uncentered box spline
/// `M_Φ(y) = ∫_{[0,1]^N} δ(y - Σ t_i α_i) dt` at points off every wall.
///
/// Sub-spline values are memoized per `(sublist mask, point)`.
pub(crate) struct BoxEvaluator<'a> {
    vectors: &'a [Vec<i64>],
    dim: usize,
    bases: HashMap<u64, Option<Basis>>,
    memo: HashMap<(u64, Vec<BigRational>), BigRational>,
}

impl<'a> BoxEvaluator<'a> {
    pub(crate) fn new(phi: &'a WeightList) -> Self {
        assert!(phi.len() < 64, "weight lists are limited to 63 vectors");
        Self { vectors: phi.vectors(), dim: phi.dim(), bases: HashMap::new(), memo: HashMap::new() }
    }

    fn full_mask(&self) -> u64 {
        (1u64 << self.vectors.len()) - 1
    }

    fn basis(&mut self, mask: u64) -> Option<&Basis> {
        if !self.bases.contains_key(&mask) {
            let mut chosen: Vec<usize> = Vec::with_capacity(self.dim);
            let mut rows: Vec<Vec<i64>> = Vec::with_capacity(self.dim);
            for i in (0..self.vectors.len()).filter(|i| mask >> i & 1 == 1) {
                rows.push(self.vectors[i].clone());
                if linalg::rank_int(&rows) == rows.len() {
                    chosen.push(i);
                    if chosen.len() == self.dim {
                        break;
                    }
                } else {
                    rows.pop();
                }
            }
            let basis = (chosen.len() == self.dim).then(|| {
                // columns are the basis vectors
                let cols: Vec<Vec<BigRational>> = (0..self.dim)
                    .map(|r| chosen.iter().map(|&i| BigRational::from_integer(self.vectors[i][r].into())).collect())
                    .collect();
                let mut inverse = vec![vec![BigRational::zero(); self.dim]; self.dim];
                for k in 0..self.dim {
                    let mut e = vec![BigRational::zero(); self.dim];
                    e[k] = BigRational::one();
                    let x = linalg::solve(&cols, &e).expect("basis is invertible");
                    for (i, xi) in x.into_iter().enumerate() {
                        inverse[i][k] = xi;
                    }
                }
                let abs_det = linalg::determinant(&cols).abs();
                Basis { indices: chosen, inverse, abs_det }
            });
            self.bases.insert(mask, basis);
        }
        self.bases[&mask].as_ref()
    }

    fn outside_box(&self, mask: u64, y: &[BigRational]) -> bool {
        (0..self.dim).any(|r| {
            let (mut lo, mut hi) = (0i64, 0i64);
            for i in (0..self.vectors.len()).filter(|i| mask >> i & 1 == 1) {
                let a = self.vectors[i][r];
                if a < 0 {
                    lo += a;
                } else {
                    hi += a;
                }
            }
            y[r] < BigRational::from_integer(lo.into()) || y[r] > BigRational::from_integer(hi.into())
        })
    }

    pub(crate) fn uncentered(&mut self, mask: u64, y: &[BigRational]) -> Result<BigRational> {
        if self.outside_box(mask, y) {
            return Ok(BigRational::zero());
        }
        let key = (mask, y.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let count = mask.count_ones() as usize;
        let Some(basis) = self.basis(mask) else {
            // lower-dimensional support: zero off the walls
            return Ok(BigRational::zero());
        };
        let t: Vec<BigRational> = basis
            .inverse
            .iter()
            .map(|row| row.iter().zip(y).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect();
        let indices = basis.indices.clone();
        let abs_det = basis.abs_det.clone();
        let value = if count == self.dim {
            let one = BigRational::one();
            if t.iter().any(|x| x.is_negative() || *x > one) {
                BigRational::zero()
            } else if t.iter().any(|x| x.is_zero() || *x == one) {
                return Err(Error::NonGenericPoint);
            } else {
                abs_det.recip()
            }
        } else {
            let mut coeff = vec![BigRational::zero(); self.vectors.len()];
            for (i, ti) in indices.iter().zip(t) {
                coeff[*i] = ti;
            }
            let mut sum = BigRational::zero();
            for j in (0..self.vectors.len()).filter(|j| mask >> j & 1 == 1) {
                let sub = mask & !(1u64 << j);
                let tj = coeff[j].clone();
                if !tj.is_zero() {
                    sum += &tj * self.uncentered(sub, y)?;
                }
                let rest = BigRational::one() - tj;
                if !rest.is_zero() {
                    let shifted: Vec<BigRational> = y
                        .iter()
                        .zip(&self.vectors[j])
                        .map(|(a, &b)| a - BigRational::from_integer(b.into()))
                        .collect();
                    sum += rest * self.uncentered(sub, &shifted)?;
                }
            }
            sum / BigRational::from_integer(((count - self.dim) as i64).into())
        };
        self.memo.insert(key, value.clone());
        Ok(value)
    }

    /// Density of the centered spline at a regular point `x`.
    pub(crate) fn centered(&mut self, rho: &[BigRational], x: &[BigRational]) -> Result<BigRational> {
        let y: Vec<BigRational> = x.iter().zip(rho).map(|(a, b)| a + b).collect();
        let full = self.full_mask();
        self.uncentered(full, &y)
    }
}

/// Removing any single vector leaves a spanning list, so the density is continuous.
pub fn is_continuous(phi: &WeightList) -> bool {
    (0..phi.len()).all(|j| {
        let rest: Vec<Vec<i64>> =
            phi.vectors().iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| v.clone()).collect();
        linalg::rank_int(&rest) == phi.dim()
    })
}

/// Density of the centered box spline `B_c(Φ)` at `x`.
///
/// Off the walls the value comes from the knock-one-out recurrence. On a
/// wall the density is only well defined when it is continuous; then the
/// value is the limit of the adjacent local piece. Otherwise the point is
/// rejected with [`Error::NonGenericPoint`].
pub fn eval_box(phi: &WeightList, x: &[BigRational]) -> Result<BigRational> {
    phi.require_spanning()?;
    if x.len() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: x.len() });
    }
    if is_regular(x, phi)? {
        return BoxEvaluator::new(phi).centered(phi.rho(), x);
    }
    if !is_continuous(phi) {
        return Err(Error::NonGenericPoint);
    }
    let germ = alcove_of(x, &default_epsilon(phi, 0)?, phi)?;
    Ok(local_piece(phi, &germ, 0)?.poly.eval(x))
}
