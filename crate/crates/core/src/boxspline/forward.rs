use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::piece::{PieceTable, PolynomialGerm};
use super::twisted::twisted_expansion;
use crate::algebra::{Cyclotomic, Field, MultiPoly};
use crate::lattice::{alcove_of, vertex_set, AlcoveGerm, TorusPoint, WeightList};
use crate::{Error, Result};

/// A finitely supported function on `shift + Z^d`.
///
/// Values are keyed by the integer part `κ` of the point `shift + κ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityFunction {
    shift: Vec<BigRational>,
    values: BTreeMap<Vec<i64>, BigRational>,
}

impl MultiplicityFunction {
    pub fn zero(dim: usize) -> Self {
        Self::with_shift(vec![BigRational::zero(); dim])
    }

    pub fn with_shift(shift: Vec<BigRational>) -> Self {
        Self { shift, values: BTreeMap::new() }
    }

    pub fn delta(point: Vec<i64>) -> Self {
        let mut m = Self::zero(point.len());
        m.set_lattice(point, BigRational::one());
        m
    }

    pub fn from_lattice_values(dim: usize, values: impl IntoIterator<Item = (Vec<i64>, BigRational)>) -> Self {
        let mut m = Self::zero(dim);
        for (k, v) in values {
            m.add_lattice(k, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> &[BigRational] {
        &self.shift
    }

    /// Nonzero values keyed by lattice part, in lexicographic order.
    pub fn lattice_values(&self) -> &BTreeMap<Vec<i64>, BigRational> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, kappa: &[i64]) -> Vec<BigRational> {
        self.shift.iter().zip(kappa).map(|(s, &k)| s + BigRational::from_integer(k.into())).collect()
    }

    /// Lattice part of `x`, if `x ∈ shift + Z^d`.
    pub fn lattice_part(&self, x: &[BigRational]) -> Option<Vec<i64>> {
        if x.len() != self.dim() {
            return None;
        }
        x.iter()
            .zip(&self.shift)
            .map(|(a, s)| {
                let k = a - s;
                k.is_integer().then(|| i64::try_from(k.to_integer()).ok()).flatten()
            })
            .collect()
    }

    /// Value at `x`; zero off the support and off the shifted lattice.
    pub fn get(&self, x: &[BigRational]) -> BigRational {
        self.lattice_part(x).and_then(|k| self.values.get(&k).cloned()).unwrap_or_else(BigRational::zero)
    }

    pub fn get_lattice(&self, kappa: &[i64]) -> BigRational {
        self.values.get(kappa).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set_lattice(&mut self, kappa: Vec<i64>, value: BigRational) {
        if value.is_zero() {
            self.values.remove(&kappa);
        } else {
            self.values.insert(kappa, value);
        }
    }

    pub fn add_lattice(&mut self, kappa: Vec<i64>, value: BigRational) {
        let v = self.get_lattice(&kappa) + value;
        self.set_lattice(kappa, v);
    }

    /// Sets the value at `x`, which must lie on the shifted lattice.
    pub fn set(&mut self, x: &[BigRational], value: BigRational) -> Result<()> {
        let k = self.lattice_part(x).ok_or(Error::NotOnLattice)?;
        self.set_lattice(k, value);
        Ok(())
    }

    /// Support points `shift + κ`, in lexicographic order of `κ`.
    pub fn support(&self) -> Vec<Vec<BigRational>> {
        self.values.keys().map(|k| self.point(k)).collect()
    }

    /// Componentwise bounds of the lattice parts of the support.
    pub fn lattice_hull(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut keys = self.values.keys();
        let first = keys.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for k in keys {
            for i in 0..k.len() {
                lo[i] = lo[i].min(k[i]);
                hi[i] = hi[i].max(k[i]);
            }
        }
        Some((lo, hi))
    }

    pub fn linear_combination(&self, a: &BigRational, other: &Self, b: &BigRational) -> Result<Self> {
        if self.shift != other.shift {
            return Err(Error::NotOnLattice);
        }
        let mut out = Self::with_shift(self.shift.clone());
        for (k, v) in &self.values {
            out.add_lattice(k.clone(), v * a);
        }
        for (k, v) in &other.values {
            out.add_lattice(k.clone(), v * b);
        }
        Ok(out)
    }
}

struct VertexData {
    vertex: TorusPoint,
    terms: Vec<(Cyclotomic, Vec<BigRational>)>,
    table: PieceTable,
}

/// Local pieces of the measures `b(s,m,Φ) = (Σ_λ s^λ m(λ) δ_λ) * B_c(s,Φ)` for
/// every vertex `s` of `Φ`.
///
/// For `m` on a shifted lattice `σ + Z^d` the character is applied to the
/// integer part, `s^{σ+κ} := s^κ`.
pub struct ForwardModel {
    m: MultiplicityFunction,
    phi: WeightList,
    vertices: Vec<VertexData>,
}

impl ForwardModel {
    pub fn new(m: MultiplicityFunction, phi: WeightList, seed: u64) -> Result<Self> {
        Self::with_vertices(m, phi, vertex_set, seed)
    }

    /// Only the identity vertex, which suffices for unimodular `Φ`.
    pub fn identity_only(m: MultiplicityFunction, phi: WeightList, seed: u64) -> Result<Self> {
        Self::with_vertices(m, phi, |phi| Ok(vec![TorusPoint::identity(phi.dim())]), seed)
    }

    fn with_vertices(
        m: MultiplicityFunction,
        phi: WeightList,
        vertices: impl FnOnce(&WeightList) -> Result<Vec<TorusPoint>>,
        seed: u64,
    ) -> Result<Self> {
        phi.require_spanning()?;
        if m.dim() != phi.dim() {
            return Err(Error::DimensionMismatch { expected: phi.dim(), found: m.dim() });
        }
        let vertices = vertices(&phi)?
            .into_iter()
            .map(|s| {
                let expansion = twisted_expansion(&s, &phi)?;
                let table = PieceTable::new(expansion.sublist.clone(), seed)?;
                Ok(VertexData { terms: expansion.merged(), vertex: s, table })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { m, phi, vertices })
    }

    pub fn phi(&self) -> &WeightList {
        &self.phi
    }

    pub fn multiplicity(&self) -> &MultiplicityFunction {
        &self.m
    }

    pub fn vertices(&self) -> Vec<TorusPoint> {
        self.vertices.iter().map(|v| v.vertex.clone()).collect()
    }

    /// Density of `b(s,m,Φ)` on the alcove entered by `λ + tε`, for the
    /// `index`-th vertex.
    pub fn piece(&self, index: usize, lambda: &[BigRational], epsilon: &[BigRational]) -> Result<MultiPoly<Cyclotomic>> {
        let data = &self.vertices[index];
        let dim = self.phi.dim();
        let mut out = MultiPoly::zero(dim);
        for (kappa, value) in self.m.lattice_values() {
            let weight = data.vertex.character(kappa).scale(value);
            let origin = self.m.point(kappa);
            for (coef, shift) in &data.terms {
                let offset: Vec<BigRational> = origin.iter().zip(shift).map(|(a, b)| a + b).collect();
                let base: Vec<BigRational> = lambda.iter().zip(&offset).map(|(a, b)| a - b).collect();
                let piece = data.table.piece_at(&base, epsilon)?;
                if piece.is_zero() {
                    continue;
                }
                let c = weight.clone() * coef.clone();
                out = &out + &piece.shifted(&offset).map(|q| c.scale(q));
            }
        }
        Ok(out)
    }
}

/// Local polynomial of `b(s,m,Φ)` on the alcove of `germ`.
pub fn forward_piece(
    m: &MultiplicityFunction,
    s: &TorusPoint,
    phi: &WeightList,
    germ: &AlcoveGerm,
) -> Result<PolynomialGerm<Cyclotomic>> {
    let model = ForwardModel::with_vertices(m.clone(), phi.clone(), |_| Ok(vec![s.clone()]), 0)?;
    let own = alcove_of(germ.base(), germ.perturbation(), phi)?;
    let poly = model.piece(0, own.base(), own.perturbation())?;
    Ok(PolynomialGerm { germ: germ.clone(), poly, degree_bound: phi.degree_bound() })
}
