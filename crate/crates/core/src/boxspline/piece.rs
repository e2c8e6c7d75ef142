use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::Signed;

use super::eval::BoxEvaluator;
use crate::algebra::{linalg, monomials_up_to, MultiPoly};
use crate::lattice::{alcove_of, germ_in, sample_alcove_points, AffineWallFamily, AlcoveGerm, WeightList};
use crate::{Error, Result};

/// A polynomial density valid on the alcove named by `germ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialGerm<T> {
    pub germ: AlcoveGerm,
    pub poly: MultiPoly<T>,
    pub degree_bound: usize,
}

const HELD_OUT: usize = 2;
const INTERPOLATION_ATTEMPTS: u64 = 8;

fn slab_radii(phi: &WeightList, families: &[AffineWallFamily]) -> Vec<BigRational> {
    families
        .iter()
        .map(|f| {
            let total: i64 = phi.vectors().iter().map(|a| a.iter().zip(&f.normal).map(|(x, u)| x * u).sum::<i64>().abs()).sum();
            BigRational::new(total.into(), 2.into())
        })
        .collect()
}

/// Interpolates the piece of `B_c(Φ)` on the alcove of `germ` (whose walls
/// must be those of `phi`).
fn interpolate(phi: &WeightList, germ: &AlcoveGerm, radii: &[BigRational], seed: u64) -> Result<MultiPoly<BigRational>> {
    let dim = phi.dim();
    if germ.outside_slabs(radii) {
        return Ok(MultiPoly::zero(dim));
    }
    let monos = monomials_up_to(dim, phi.degree_bound());
    let n = monos.len();
    let mut evaluator = BoxEvaluator::new(phi);
    for attempt in 0..INTERPOLATION_ATTEMPTS {
        let points = sample_alcove_points(germ, n + HELD_OUT, seed.wrapping_add(attempt.wrapping_mul(7919)))?;
        let values = points
            .iter()
            .map(|p| evaluator.centered(phi.rho(), p))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<BigRational>> = points[..n]
            .iter()
            .map(|p| {
                monos
                    .iter()
                    .map(|e| {
                        p.iter().zip(e).fold(BigRational::from_integer(1.into()), |acc, (x, &k)| {
                            acc * num_traits::pow(x.clone(), k as usize)
                        })
                    })
                    .collect()
            })
            .collect();
        let Some(coeffs) = linalg::solve(&rows, &values[..n]) else {
            continue;
        };
        let poly = MultiPoly::from_terms(dim, monos.iter().cloned().zip(coeffs));
        for (p, v) in points[n..].iter().zip(&values[n..]) {
            if poly.eval(p) != *v {
                return Err(Error::HeldOutMismatch);
            }
        }
        return Ok(poly);
    }
    Err(Error::SingularInterpolation { attempts: INTERPOLATION_ATTEMPTS as usize })
}

/// The polynomial of degree `≤ N - d` that equals `B_c(Φ)` on the germ's alcove.
///
/// The germ may come from a finer arrangement than that of `phi` (for
/// instance the arrangement of a superlist); only its base point and
/// perturbation are used to locate the alcove of `phi`.
pub fn local_piece(phi: &WeightList, germ: &AlcoveGerm, seed: u64) -> Result<PolynomialGerm<BigRational>> {
    phi.require_spanning()?;
    let own = alcove_of(germ.base(), germ.perturbation(), phi)?;
    let radii = slab_radii(phi, own.families());
    let poly = interpolate(phi, &own, &radii, seed)?;
    Ok(PolynomialGerm { germ: germ.clone(), poly, degree_bound: phi.degree_bound() })
}

/// Memoized local pieces of one box spline, keyed by alcove signature.
pub struct PieceTable {
    phi: WeightList,
    families: Arc<Vec<AffineWallFamily>>,
    radii: Vec<BigRational>,
    box_radius: Vec<BigRational>,
    seed: u64,
    cache: Mutex<HashMap<Vec<i64>, Arc<MultiPoly<BigRational>>>>,
}

impl PieceTable {
    pub fn new(phi: WeightList, seed: u64) -> Result<Self> {
        let families = phi.wall_families()?;
        let radii = slab_radii(&phi, &families);
        let box_radius = phi.zonotope_radius();
        Ok(Self { phi, families, radii, box_radius, seed, cache: Mutex::new(HashMap::new()) })
    }

    pub fn phi(&self) -> &WeightList {
        &self.phi
    }

    /// Piece on the alcove entered by `base + tε`; `ε` must be generic for `phi`.
    pub fn piece_at(&self, base: &[BigRational], epsilon: &[BigRational]) -> Result<Arc<MultiPoly<BigRational>>> {
        let dim = self.phi.dim();
        if base.iter().zip(&self.box_radius).any(|(x, r)| x.abs() > *r) {
            return Ok(Arc::new(MultiPoly::zero(dim)));
        }
        let germ = germ_in(self.families.clone(), base, epsilon);
        if germ.outside_slabs(&self.radii) {
            return Ok(Arc::new(MultiPoly::zero(dim)));
        }
        if let Some(p) = self.cache.lock().unwrap().get(germ.signature()) {
            return Ok(p.clone());
        }
        let poly = Arc::new(interpolate(&self.phi, &germ, &self.radii, self.seed)?);
        self.cache.lock().unwrap().insert(germ.signature().to_vec(), poly.clone());
        Ok(poly)
    }

    pub fn cached_pieces(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}
