use num_rational::BigRational;
use num_traits::Zero;

use super::operator::{build_vertex_operator, VertexOperator};
use crate::algebra::{Cyclotomic, Field, MultiPoly};
use crate::boxspline::{ForwardModel, PolynomialGerm};
use crate::lattice::{common_order, is_generic, TorusPoint, WeightList};
use crate::{Error, Result};

/// Source of the local pieces of `b(s,m,Φ)`, one per vertex.
pub trait PieceProvider {
    fn vertices(&self) -> Vec<TorusPoint>;

    /// The lattice `σ + Z^d` carrying `m`; characters act on the integer part.
    fn lattice_shift(&self) -> &[BigRational];

    /// Density of `b(s,m,Φ)` for the `index`-th vertex on the alcove entered by `λ + tε`.
    fn piece(&self, index: usize, lambda: &[BigRational], epsilon: &[BigRational]) -> Result<MultiPoly<Cyclotomic>>;
}

impl PieceProvider for ForwardModel {
    fn vertices(&self) -> Vec<TorusPoint> {
        ForwardModel::vertices(self)
    }

    fn lattice_shift(&self) -> &[BigRational] {
        self.multiplicity().shift()
    }

    fn piece(&self, index: usize, lambda: &[BigRational], epsilon: &[BigRational]) -> Result<MultiPoly<Cyclotomic>> {
        ForwardModel::piece(self, index, lambda, epsilon)
    }
}

/// One vertex's share of the recovered value.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexContribution {
    pub vertex: TorusPoint,
    /// `lim_ε Â(s,Φ) b(s,m)` at `λ`.
    pub limit: Cyclotomic,
    /// `s^{-λ}` times the limit.
    pub value: Cyclotomic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Deconvolution {
    pub value: BigRational,
    pub field_order: u64,
    /// The sum before the rationality check, in `Q(ζ_field_order)`.
    pub total: Cyclotomic,
    pub contributions: Vec<VertexContribution>,
}

/// `Â(s,Φ)` for every vertex, prepared once for many query points.
pub struct Deconvolver {
    phi: WeightList,
    epsilon: Vec<BigRational>,
    operators: Vec<VertexOperator>,
    field_order: u64,
}

impl Deconvolver {
    pub fn new(phi: &WeightList, vertices: &[TorusPoint], epsilon: &[BigRational]) -> Result<Self> {
        phi.require_spanning()?;
        if epsilon.len() != phi.dim() {
            return Err(Error::DimensionMismatch { expected: phi.dim(), found: epsilon.len() });
        }
        if !is_generic(epsilon, phi) {
            return Err(Error::NonGenericVector);
        }
        let operators = vertices.iter().map(|s| build_vertex_operator(s, phi)).collect::<Result<Vec<_>>>()?;
        Ok(Self { phi: phi.clone(), epsilon: epsilon.to_vec(), operators, field_order: common_order(vertices) })
    }

    pub fn operators(&self) -> &[VertexOperator] {
        &self.operators
    }

    /// `Σ_s s^{-λ} lim_ε Â(s,Φ) b(s,m)(λ)`; the provider's vertices must match
    /// the ones this deconvolver was built for.
    pub fn deconvolve(&self, provider: &impl PieceProvider, lambda: &[BigRational]) -> Result<Deconvolution> {
        if lambda.len() != self.phi.dim() {
            return Err(Error::DimensionMismatch { expected: self.phi.dim(), found: lambda.len() });
        }
        let kappa = lattice_part(lambda, provider.lattice_shift())?;
        let neg_kappa: Vec<i64> = kappa.iter().map(|k| -k).collect();
        let mut total = Cyclotomic::zero().embed(self.field_order)?;
        let mut contributions = Vec::with_capacity(self.operators.len());
        for (index, op) in self.operators.iter().enumerate() {
            let piece = provider.piece(index, lambda, &self.epsilon)?;
            let limit = op.apply(&piece)?.eval(lambda).embed(self.field_order)?;
            let value = op.vertex.character(&neg_kappa).embed(self.field_order)? * limit.clone();
            total = total + value.clone();
            contributions.push(VertexContribution { vertex: op.vertex.clone(), limit, value });
        }
        let total = total.embed(self.field_order)?;
        let value = total.as_rational().ok_or_else(|| Error::NonRationalSum(total.to_string()))?;
        Ok(Deconvolution { value, field_order: self.field_order, total, contributions })
    }
}

fn lattice_part(lambda: &[BigRational], shift: &[BigRational]) -> Result<Vec<i64>> {
    lambda
        .iter()
        .zip(shift)
        .map(|(a, s)| {
            let k = a - s;
            if !k.is_integer() {
                return Err(Error::NotOnLattice);
            }
            i64::try_from(k.to_integer()).map_err(|_| Error::NotOnLattice)
        })
        .collect()
}

/// Value of the piece at the base point of its germ.
pub fn limit_value<T: Field>(piece: &PolynomialGerm<T>, lambda: &[BigRational]) -> Result<T> {
    if piece.germ.base() != lambda {
        return Err(Error::GermMismatch);
    }
    Ok(piece.poly.eval(lambda))
}

/// Recovers `m(λ)` from the pieces of all vertices.
pub fn deconvolve_at(
    provider: &impl PieceProvider,
    phi: &WeightList,
    lambda: &[BigRational],
    epsilon: &[BigRational],
) -> Result<Deconvolution> {
    Deconvolver::new(phi, &provider.vertices(), epsilon)?.deconvolve(provider, lambda)
}

fn identity_limit(
    provider: &impl PieceProvider,
    phi: &WeightList,
    lambda: &[BigRational],
    epsilon: &[BigRational],
) -> Result<BigRational> {
    let identity = TorusPoint::identity(phi.dim());
    let index = provider.vertices().iter().position(|s| *s == identity).ok_or(Error::NotAVertex)?;
    let d = Deconvolver::new(phi, &[identity], epsilon)?;
    lattice_part(lambda, provider.lattice_shift())?;
    let piece = provider.piece(index, lambda, epsilon)?;
    let limit = d.operators[0].apply(&piece)?.eval(lambda);
    limit.as_rational().ok_or_else(|| Error::NonRationalSum(limit.to_string()))
}

/// `lim_ε Â(Φ) b(m)` at `λ`; for unimodular `Φ` this is `m(λ)`.
pub fn deconvolve_unimodular(
    provider: &impl PieceProvider,
    phi: &WeightList,
    lambda: &[BigRational],
    epsilon: &[BigRational],
) -> Result<BigRational> {
    if !phi.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    identity_limit(provider, phi, lambda, epsilon)
}

/// The identity-vertex term `lim_ε Â(Φ) b(m)` at `ν`, i.e. the reduced-space
/// quantization number. Integral whenever `Φ` is unimodular and `m` integral.
pub fn reduced_quantization(
    provider: &impl PieceProvider,
    phi: &WeightList,
    nu: &[BigRational],
    epsilon: &[BigRational],
) -> Result<BigRational> {
    identity_limit(provider, phi, nu, epsilon)
}
