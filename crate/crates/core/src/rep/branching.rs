use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::freudenthal::{weight_multiplicities, weyl_dimension};
use super::root::RootDatum;
use crate::boxspline::MultiplicityFunction;
use crate::lattice::{smith_normal_form, WeightList};
use crate::{Error, Result};

/// A subgroup `H ⊂ G` seen through maximal tori: the restriction matrix maps
/// `G`-weight coordinates to `H`-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub ambient: RootDatum,
    pub subgroup: RootDatum,
    /// `rank(H) × rank(G)` integer matrix.
    pub restriction: Vec<Vec<i64>>,
}

/// Which vector of each `±` pair of `Δ(g/h)` goes into `Φ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// First nonzero coordinate positive.
    #[default]
    FirstPositive,
    /// Last nonzero coordinate negative.
    LastNegative,
}

impl Selection {
    fn keeps(self, v: &[i64]) -> bool {
        match self {
            Selection::FirstPositive => v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0),
            Selection::LastNegative => v.iter().rev().find(|&&x| x != 0).is_some_and(|&x| x < 0),
        }
    }
}

impl EmbeddingSpec {
    pub fn new(ambient: RootDatum, subgroup: RootDatum, restriction: Vec<Vec<i64>>) -> Result<Self> {
        let spec = Self { ambient, subgroup, restriction };
        spec.validate()?;
        Ok(spec)
    }

    /// `H = T`: the maximal torus of `G` with identity restriction.
    pub fn maximal_torus(ambient: RootDatum) -> Self {
        let n = ambient.rank();
        let restriction = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self { subgroup: RootDatum::torus(n), ambient, restriction }
    }

    pub fn validate(&self) -> Result<()> {
        let (dg, dh) = (self.ambient.rank(), self.subgroup.rank());
        if self.restriction.len() != dh || self.restriction.iter().any(|r| r.len() != dg) {
            return Err(Error::InconsistentEmbedding(format!("restriction must be {dh}×{dg}")));
        }
        let snf = smith_normal_form(&self.restriction);
        if snf.invariant_factors() != vec![1; dh] {
            return Err(Error::InconsistentEmbedding("restriction is not onto the weight lattice of H".into()));
        }
        self.quotient_weights()?;
        Ok(())
    }

    pub fn restrict(&self, v: &[i64]) -> Vec<i64> {
        self.restriction.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Nonzero weights of `T_H` on `g/h`: the restricted roots of `G`
    /// with the roots of `H` removed (as multisets).
    pub fn quotient_weights(&self) -> Result<Vec<Vec<i64>>> {
        let mut counts: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for r in self.ambient.roots() {
            *counts.entry(self.restrict(&r)).or_default() += 1;
        }
        for r in self.subgroup.roots() {
            let c = counts.entry(r).or_default();
            *c -= 1;
            if *c < 0 {
                return Err(Error::InconsistentEmbedding("a root of H is not a restricted root of G".into()));
            }
        }
        let zero = vec![0; self.subgroup.rank()];
        let mut out = Vec::new();
        for (v, c) in &counts {
            if *v == zero {
                continue;
            }
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            if counts.get(&neg) != Some(c) {
                return Err(Error::InconsistentEmbedding("weights of g/h are not symmetric".into()));
            }
            out.extend(std::iter::repeat_n(v.clone(), *c as usize));
        }
        Ok(out)
    }
}

/// `Φ` from `Δ(g/h)`: one vector out of each `±` pair, chosen by first-nonzero positivity.
pub fn phi_from_embedding(spec: &EmbeddingSpec) -> Result<WeightList> {
    phi_from_embedding_with(spec, Selection::FirstPositive)
}

pub fn phi_from_embedding_with(spec: &EmbeddingSpec, selection: Selection) -> Result<WeightList> {
    let vectors: Vec<Vec<i64>> = spec.quotient_weights()?.into_iter().filter(|v| selection.keeps(v)).collect();
    WeightList::spanning(spec.subgroup.rank(), vectors)
}

/// Character of the restriction to `T_H`, as weight multiplicities.
pub fn restricted_character(spec: &EmbeddingSpec, highest: &[i64]) -> Result<MultiplicityFunction> {
    let m = weight_multiplicities(&spec.ambient, highest)?;
    let mut out = MultiplicityFunction::zero(spec.subgroup.rank());
    for (k, v) in m.lattice_values() {
        out.add_lattice(spec.restrict(k), v.clone());
    }
    Ok(out)
}

/// Branching multiplicities, indexed by `μ = ν + ρ_H ∈ P_h⁺` for each
/// `H`-type of highest weight `ν`.
///
/// The restricted character times the Weyl denominator `Σ_w ε(w) e^{wρ_H}`
/// is `Σ_ν mult(ν) Σ_w ε(w) e^{w(ν+ρ_H)}`; its part in the open chamber is the answer.
pub fn branch(spec: &EmbeddingSpec, highest: &[i64]) -> Result<MultiplicityFunction> {
    spec.validate()?;
    let h = &spec.subgroup;
    let chi = restricted_character(spec, highest)?;
    let rho = h.rho().to_vec();
    let mut alternating = MultiplicityFunction::with_shift(rho.clone());
    for w in h.weyl_group()? {
        let wrho = w.apply_rational(&rho);
        let sign = BigRational::from_integer(w.sign.into());
        for (k, v) in chi.lattice_values() {
            let point: Vec<BigRational> = k.iter().zip(&wrho).map(|(&a, b)| b + BigRational::from_integer(a.into())).collect();
            let kappa = alternating.lattice_part(&point).ok_or(Error::NotOnLattice)?;
            alternating.add_lattice(kappa, v * &sign);
        }
    }
    let mut out = MultiplicityFunction::with_shift(rho);
    for (k, v) in alternating.lattice_values() {
        if h.is_regular_dominant(&out.point(k)) {
            if v.is_negative() {
                return Err(Error::InconsistentEmbedding("negative branching multiplicity".into()));
            }
            out.set_lattice(k.clone(), v.clone());
        }
    }
    Ok(out)
}

/// `m(wμ) = ε(w) mult(μ)` on all of `P_h`.
pub fn antiinvariant_extend(mult: &MultiplicityFunction, h: &RootDatum) -> Result<MultiplicityFunction> {
    let mut out = MultiplicityFunction::with_shift(mult.shift().to_vec());
    let w = h.weyl_group()?;
    for (k, v) in mult.lattice_values() {
        let mu = mult.point(k);
        if !h.is_regular_dominant(&mu) {
            return Err(Error::WallSupport);
        }
        for e in &w {
            let image = e.apply_rational(&mu);
            let kappa = out.lattice_part(&image).ok_or(Error::NotOnLattice)?;
            out.add_lattice(kappa, v * BigRational::from_integer(e.sign.into()));
        }
    }
    Ok(out)
}

/// Dimension of the `H`-type labelled by `μ ∈ P_h⁺`, i.e. of highest weight `μ - ρ_H`.
pub fn subgroup_dimension(h: &RootDatum, mu: &[BigRational]) -> Result<BigRational> {
    let highest: Vec<i64> = mu
        .iter()
        .zip(h.rho())
        .map(|(a, b)| {
            let x = a - b;
            if x.is_integer() {
                i64::try_from(x.to_integer()).map_err(|_| Error::NotOnLattice)
            } else {
                Err(Error::NotOnLattice)
            }
        })
        .collect::<Result<_>>()?;
    weyl_dimension(h, &highest)
}

/// `Σ_μ mult(μ) dim_H(μ)`.
pub fn branched_dimension(h: &RootDatum, mult: &MultiplicityFunction) -> Result<BigRational> {
    mult.lattice_values().iter().try_fold(BigRational::zero(), |acc, (k, v)| {
        Ok(acc + v * subgroup_dimension(h, &mult.point(k))?)
    })
}
