use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::weights::WeightList;
use crate::algebra::linalg;
use crate::{Error, Result};

/// All translates `{x : ⟨normal, x⟩ ∈ phase + step·Z}` of one hyperplane
/// direction spanned by elements of `Φ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineWallFamily {
    /// Primitive integer covector, first nonzero entry positive.
    pub normal: Vec<i64>,
    /// `gcd ⟨normal, Λ⟩`; equal to 1 for a primitive normal on `Z^d`.
    pub step: i64,
    /// `⟨normal, ρ_Φ⟩ mod step`, in `[0, step)`.
    pub phase: BigRational,
}

fn normalize_covector(mut u: Vec<i64>) -> Option<Vec<i64>> {
    let g = u.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    let first = *u.iter().find(|&&x| x != 0).unwrap();
    let g = if first < 0 { -g } else { g };
    for x in u.iter_mut() {
        *x /= g;
    }
    Some(u)
}

/// Covector vanishing on the `d-1` given vectors (generalized cross product).
fn cofactor_normal(rows: &[Vec<i64>], dim: usize) -> Vec<i64> {
    (0..dim)
        .map(|col| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, &x)| x).collect())
                .collect();
            let det = linalg::det_int(&minor);
            if col % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

pub(crate) fn compute_wall_families(phi: &WeightList) -> Vec<AffineWallFamily> {
    let dim = phi.dim();
    let mut normals = BTreeSet::new();
    if dim == 1 {
        normals.insert(vec![1]);
    } else {
        for idx in (0..phi.len()).combinations(dim - 1) {
            let rows: Vec<Vec<i64>> = idx.iter().map(|&i| phi.vectors()[i].clone()).collect();
            if let Some(u) = normalize_covector(cofactor_normal(&rows, dim)) {
                normals.insert(u);
            }
        }
    }
    normals
        .into_iter()
        .map(|normal| {
            let step = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
            let stepq = BigRational::from_integer(step.into());
            let pairing = WeightList::pair(&normal, phi.rho());
            let phase = &pairing - (&pairing / &stepq).floor() * &stepq;
            AffineWallFamily { normal, step, phase }
        })
        .collect()
}

/// Every hyperplane direction spanned by elements of `Φ`, with its offsets.
pub fn wall_families(phi: &WeightList) -> Result<Vec<AffineWallFamily>> {
    Ok(phi.wall_families()?.as_ref().clone())
}

/// `ε` lies on no hyperplane spanned by elements of `Φ`.
pub fn is_generic(epsilon: &[BigRational], phi: &WeightList) -> bool {
    if epsilon.len() != phi.dim() {
        return false;
    }
    match phi.wall_families() {
        Ok(families) => families.iter().all(|f| !WeightList::pair(&f.normal, epsilon).is_zero()),
        Err(_) => false,
    }
}

/// Deterministic generic integer direction drawn from `seed`.
pub fn default_epsilon(phi: &WeightList, seed: u64) -> Result<Vec<BigRational>> {
    phi.require_spanning()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    loop {
        let eps: Vec<BigRational> = (0..phi.dim())
            .map(|_| {
                let mut x = 0i64;
                while x == 0 {
                    x = rng.gen_range(-997..=997);
                }
                BigRational::from_integer(x.into())
            })
            .collect();
        if is_generic(&eps, phi) {
            return Ok(eps);
        }
    }
}

/// Offset index `k` such that `⟨u, x⟩ ∈ (phase + k·step, phase + (k+1)·step)`;
/// ties are resolved by the sign of `tie` (`None` reports the tie).
fn offset_index(family: &AffineWallFamily, x: &[BigRational], tie: Option<&[BigRational]>) -> Option<i64> {
    let stepq = BigRational::from_integer(family.step.into());
    let t = (WeightList::pair(&family.normal, x) - &family.phase) / stepq;
    let k = if t.is_integer() {
        let dir = WeightList::pair(&family.normal, tie?);
        debug_assert!(!dir.is_zero());
        if dir.is_positive() {
            t.to_integer()
        } else {
            t.to_integer() - 1
        }
    } else {
        t.floor().to_integer()
    };
    Some(k.to_i64().expect("offset index fits in i64"))
}

/// The alcove entered by `v + tε` for small `t > 0`.
#[derive(Clone, Debug)]
pub struct AlcoveGerm {
    base: Vec<BigRational>,
    perturbation: Vec<BigRational>,
    signature: Vec<i64>,
    families: Arc<Vec<AffineWallFamily>>,
}

impl PartialEq for AlcoveGerm {
    /// Two germs are equal when they name the same alcove.
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.families == other.families
    }
}

impl AlcoveGerm {
    pub fn base(&self) -> &[BigRational] {
        &self.base
    }

    pub fn perturbation(&self) -> &[BigRational] {
        &self.perturbation
    }

    pub fn signature(&self) -> &[i64] {
        &self.signature
    }

    pub fn families(&self) -> &[AffineWallFamily] {
        &self.families
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Open interval of `⟨u_i, ·⟩` on the alcove.
    pub fn interval(&self, i: usize) -> (BigRational, BigRational) {
        let f = &self.families[i];
        let step = BigRational::from_integer(f.step.into());
        let lo = &f.phase + &step * BigRational::from_integer(self.signature[i].into());
        let hi = &lo + &step;
        (lo, hi)
    }

    /// `x` is regular and lies in this alcove.
    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.families
            .iter()
            .zip(&self.signature)
            .all(|(f, &k)| offset_index(f, x, None) == Some(k))
    }

    /// Signature of the same alcove seen from another base point.
    pub fn rebased(&self, base: Vec<BigRational>) -> Self {
        Self { base, ..self.clone() }
    }

    /// The alcove lies outside the centered zonotope of `Φ`, i.e. the box
    /// spline vanishes on it. `radii[i]` is `½ Σ |⟨u_i, α⟩|`.
    pub(crate) fn outside_slabs(&self, radii: &[BigRational]) -> bool {
        (0..self.families.len()).any(|i| {
            let (lo, hi) = self.interval(i);
            lo >= radii[i] || hi <= -radii[i].clone()
        })
    }
}

pub(crate) fn germ_in(
    families: Arc<Vec<AffineWallFamily>>,
    v: &[BigRational],
    epsilon: &[BigRational],
) -> AlcoveGerm {
    let signature = families
        .iter()
        .map(|f| offset_index(f, v, Some(epsilon)).expect("tie broken by generic direction"))
        .collect();
    AlcoveGerm { base: v.to_vec(), perturbation: epsilon.to_vec(), signature, families }
}

/// Germ of the alcove containing `v + tε` for small `t > 0`.
pub fn alcove_of(v: &[BigRational], epsilon: &[BigRational], phi: &WeightList) -> Result<AlcoveGerm> {
    let families = phi.wall_families()?;
    if v.len() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: v.len() });
    }
    if !is_generic(epsilon, phi) {
        return Err(Error::NonGenericVector);
    }
    Ok(germ_in(families, v, epsilon))
}

/// `x` avoids every wall `ρ_Φ + λ + U`.
pub fn is_regular(x: &[BigRational], phi: &WeightList) -> Result<bool> {
    let families = phi.wall_families()?;
    Ok(families.iter().all(|f| offset_index(f, x, None).is_some()))
}

pub const DEFAULT_SAMPLE_BUDGET: usize = 20_000;

const SAMPLE_DENOMINATOR: i64 = 10_007;

/// `count` distinct rational points strictly inside the germ's alcove.
pub fn sample_alcove_points(germ: &AlcoveGerm, count: usize, seed: u64) -> Result<Vec<Vec<BigRational>>> {
    sample_alcove_points_with(germ, count, seed, DEFAULT_SAMPLE_BUDGET)
}

pub fn sample_alcove_points_with(
    germ: &AlcoveGerm,
    count: usize,
    seed: u64,
    budget: usize,
) -> Result<Vec<Vec<BigRational>>> {
    let dim = germ.dim();
    let half = BigRational::new(1.into(), 2.into());
    // anchor v + δε inside the alcove
    let mut delta = BigRational::from_integer(1.into());
    let mut anchor = None;
    for _ in 0..256 {
        let p: Vec<BigRational> =
            germ.base.iter().zip(&germ.perturbation).map(|(b, e)| b + &delta * e).collect();
        if germ.contains(&p) {
            anchor = Some(p);
            break;
        }
        delta *= &half;
    }
    let anchor = anchor.ok_or(Error::SamplingFailed { attempts: 256 })?;
    let scale = germ.perturbation.iter().map(|e| e.abs()).max().unwrap_or_else(|| half.clone());
    let mut radius = &delta * &scale;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = BigRational::from_integer(SAMPLE_DENOMINATOR.into());
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut misses = 0usize;
    for _ in 0..budget {
        if out.len() == count {
            break;
        }
        let p: Vec<BigRational> = (0..dim)
            .map(|i| {
                let n = rng.gen_range(-(SAMPLE_DENOMINATOR - 1)..SAMPLE_DENOMINATOR);
                &anchor[i] + &radius * BigRational::from_integer(n.into()) / &denom
            })
            .collect();
        if germ.contains(&p) && seen.insert(p.clone()) {
            out.push(p);
            misses = 0;
        } else {
            misses += 1;
            if misses.is_multiple_of(4) {
                radius *= &half;
            }
        }
    }
    if out.len() < count {
        return Err(Error::SamplingFailed { attempts: budget });
    }
    Ok(out)
}
