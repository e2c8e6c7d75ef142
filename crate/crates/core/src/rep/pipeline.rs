use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::branching::{antiinvariant_extend, branch, phi_from_embedding_with, EmbeddingSpec, Selection};
use crate::boxspline::{ForwardModel, MultiplicityFunction};
use crate::dm::{Deconvolver, VertexContribution};
use crate::lattice::{default_epsilon, TorusPoint, WeightList};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct BranchingOptions {
    /// Generic direction; drawn from `seed` when absent.
    pub epsilon: Option<Vec<BigRational>>,
    pub seed: u64,
    /// Extra lattice steps added around the support hull inflated by the zonotope.
    pub window: i64,
    pub selection: Selection,
}

impl Default for BranchingOptions {
    fn default() -> Self {
        Self { epsilon: None, seed: 0, window: 1, selection: Selection::FirstPositive }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointRecord {
    pub nu: Vec<BigRational>,
    pub expected: BigRational,
    pub recovered: BigRational,
    /// Identity-vertex term `lim_ε Â(Φ) b(m)` at `ν`.
    pub reduced: BigRational,
    pub contributions: Vec<VertexContribution>,
}

#[derive(Clone, Debug)]
pub struct BranchingReport {
    pub phi: WeightList,
    pub epsilon: Vec<BigRational>,
    pub vertices: Vec<TorusPoint>,
    /// Oracle multiplicities on `P_h⁺`.
    pub multiplicities: MultiplicityFunction,
    /// Their anti-invariant extension to `P_h`.
    pub extended: MultiplicityFunction,
    /// Every probed `ν`, in lexicographic order of its lattice part.
    pub records: Vec<PointRecord>,
    pub mismatches: Vec<Vec<BigRational>>,
}

impl BranchingReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Recovered values on the whole window, as a function on `P_h`.
    pub fn recovered(&self) -> MultiplicityFunction {
        let mut out = MultiplicityFunction::with_shift(self.extended.shift().to_vec());
        for r in &self.records {
            out.set(&r.nu, r.recovered.clone()).expect("probe points lie on P_h");
        }
        out
    }
}

/// Lattice parts of the probe window: the support hull of `m` inflated by
/// the zonotope radius of `Φ` plus `extra`.
pub fn probe_window(m: &MultiplicityFunction, phi: &WeightList, extra: i64) -> Vec<Vec<i64>> {
    let dim = phi.dim();
    let (lo, hi) = m.lattice_hull().unwrap_or((vec![0; dim], vec![0; dim]));
    let radius: Vec<i64> = phi
        .zonotope_radius()
        .iter()
        .map(|r| i64::try_from(r.ceil().to_integer()).expect("radius fits in i64") + extra)
        .collect();
    let mut points = vec![Vec::new()];
    for i in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo[i] - radius[i]..=hi[i] + radius[i]).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    points
}

/// Oracle branching, forward pieces for every vertex, and deconvolution at
/// every point of the window, compared exactly with the oracle.
pub fn verify_branching(spec: &EmbeddingSpec, highest: &[i64], options: &BranchingOptions) -> Result<BranchingReport> {
    let multiplicities = branch(spec, highest)?;
    let extended = antiinvariant_extend(&multiplicities, &spec.subgroup)?;
    let phi = phi_from_embedding_with(spec, options.selection)?;
    let epsilon = match &options.epsilon {
        Some(e) => e.clone(),
        None => default_epsilon(&phi, options.seed)?,
    };
    let model = ForwardModel::new(extended.clone(), phi.clone(), options.seed)?;
    let vertices = model.vertices();
    let deconvolver = Deconvolver::new(&phi, &vertices, &epsilon)?;
    let identity = vertices.iter().position(TorusPoint::is_identity).ok_or(Error::NotAVertex)?;

    let records = probe_window(&extended, &phi, options.window)
        .par_iter()
        .map(|kappa| {
            let nu = extended.point(kappa);
            let d = deconvolver.deconvolve(&model, &nu)?;
            let reduced = d.contributions[identity]
                .limit
                .as_rational()
                .ok_or_else(|| Error::NonRationalSum(d.contributions[identity].limit.to_string()))?;
            Ok(PointRecord {
                expected: extended.get_lattice(kappa),
                recovered: d.value,
                reduced,
                contributions: d.contributions,
                nu,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatches = records.iter().filter(|r| r.expected != r.recovered).map(|r| r.nu.clone()).collect();
    Ok(BranchingReport { phi, epsilon, vertices, multiplicities, extended, records, mismatches })
}

/// Recovered multiplicities restricted to the open positive chamber, i.e. on `P_h⁺`.
pub fn recovered_multiplicities(report: &BranchingReport, spec: &EmbeddingSpec) -> MultiplicityFunction {
    let mut out = MultiplicityFunction::with_shift(report.extended.shift().to_vec());
    for r in &report.records {
        if spec.subgroup.is_regular_dominant(&r.nu) && !r.recovered.is_zero() {
            out.set(&r.nu, r.recovered.clone()).expect("probe points lie on P_h");
        }
    }
    out
}
