use std::collections::{BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::linalg;
use crate::{Error, Result};

pub const WEYL_GROUP_CAP: usize = 1024;

/// Integer matrix acting on weight coordinates (column vectors).
pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    /// `det(w) = ±1`.
    pub sign: i64,
}

impl WeylElement {
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (&a, b)| acc + b * BigRational::from_integer(a.into())))
            .collect()
    }
}

/// Root data of a compact connected group with maximal torus `T ≅ U(1)^rank`,
/// in the coordinates of a fixed basis of the weight lattice.
///
/// The pairing of a weight `λ` with a coroot `c` is the dot product `λ·c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RootDatumData", into = "RootDatumData")]
pub struct RootDatum {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    rho: Vec<BigRational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RootDatumData {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
}

impl TryFrom<RootDatumData> for RootDatum {
    type Error = Error;
    fn try_from(d: RootDatumData) -> Result<Self> {
        RootDatum::new(d.rank, d.simple_roots, d.simple_coroots)
    }
}

impl From<RootDatum> for RootDatumData {
    fn from(r: RootDatum) -> Self {
        RootDatumData { rank: r.rank, simple_roots: r.simple_roots, simple_coroots: r.simple_coroots }
    }
}

fn pair(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reflection(root: &[i64], coroot: &[i64]) -> IntMatrix {
    let n = root.len();
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j) - root[i] * coroot[j]).collect()).collect()
}

fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect()).collect()
}

impl RootDatum {
    pub fn new(rank: usize, simple_roots: Vec<Vec<i64>>, simple_coroots: Vec<Vec<i64>>) -> Result<Self> {
        if simple_roots.len() != simple_coroots.len() {
            return Err(Error::InvalidRootDatum("root and coroot counts differ".into()));
        }
        if simple_roots.iter().chain(&simple_coroots).any(|v| v.len() != rank) {
            return Err(Error::InvalidRootDatum(format!("vectors must have length {rank}")));
        }
        for (i, a) in simple_roots.iter().enumerate() {
            for (j, c) in simple_coroots.iter().enumerate() {
                let p = pair(a, c);
                if (i == j && p != 2) || (i != j && p > 0) {
                    return Err(Error::InvalidRootDatum(format!("Cartan entry ({i},{j}) = {p}")));
                }
            }
        }
        if !simple_roots.is_empty() && linalg::rank_int(&simple_roots) != simple_roots.len() {
            return Err(Error::InvalidRootDatum("simple roots are dependent".into()));
        }
        let mut datum = Self { rank, simple_roots, simple_coroots, positive_roots: Vec::new(), rho: Vec::new() };
        datum.positive_roots = datum.compute_positive_roots()?;
        datum.rho = (0..rank)
            .map(|i| BigRational::new(datum.positive_roots.iter().map(|r| r[i]).sum::<i64>().into(), 2.into()))
            .collect();
        Ok(datum)
    }

    /// Weight coordinates with respect to fundamental weights: coroots are unit
    /// covectors and root `i` is row `i` of the Cartan matrix `C_ij = ⟨α_i, α_j^∨⟩`.
    pub fn from_cartan(cartan: &[Vec<i64>]) -> Result<Self> {
        let n = cartan.len();
        let coroots = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self::new(n, cartan.to_vec(), coroots)
    }

    /// Coordinates of the root lattice (the adjoint group): roots are unit
    /// vectors and coroot `j` is column `j` of the Cartan matrix.
    pub fn adjoint_from_cartan(cartan: &[Vec<i64>]) -> Result<Self> {
        let n = cartan.len();
        let roots = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let coroots = (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
        Self::new(n, roots, coroots)
    }

    pub fn a1() -> Self {
        Self::from_cartan(&[vec![2]]).unwrap()
    }

    pub fn a2() -> Self {
        Self::from_cartan(&[vec![2, -1], vec![-1, 2]]).unwrap()
    }

    pub fn b2() -> Self {
        Self::from_cartan(&[vec![2, -2], vec![-1, 2]]).unwrap()
    }

    pub fn c2() -> Self {
        Self::from_cartan(&[vec![2, -1], vec![-2, 2]]).unwrap()
    }

    pub fn g2() -> Self {
        Self::from_cartan(&[vec![2, -1], vec![-3, 2]]).unwrap()
    }

    /// The torus `U(1)^rank`: no roots.
    pub fn torus(rank: usize) -> Self {
        Self::new(rank, Vec::new(), Vec::new()).unwrap()
    }

    /// Direct product; coordinates are concatenated.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.rank + other.rank;
        let pad = |v: &[i64], left: bool| -> Vec<i64> {
            let mut out = vec![0; n];
            let offset = if left { 0 } else { self.rank };
            out[offset..offset + v.len()].copy_from_slice(v);
            out
        };
        let roots = self.simple_roots.iter().map(|v| pad(v, true)).chain(other.simple_roots.iter().map(|v| pad(v, false)));
        let coroots =
            self.simple_coroots.iter().map(|v| pad(v, true)).chain(other.simple_coroots.iter().map(|v| pad(v, false)));
        Self::new(n, roots.collect(), coroots.collect()).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// All roots, positive ones first.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let neg = self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect());
        self.positive_roots.iter().cloned().chain(neg).collect()
    }

    pub fn rho(&self) -> &[BigRational] {
        &self.rho
    }

    pub fn cartan_matrix(&self) -> IntMatrix {
        self.simple_roots.iter().map(|a| self.simple_coroots.iter().map(|c| pair(a, c)).collect()).collect()
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        self.simple_coroots.iter().all(|c| pair(lambda, c) >= 0)
    }

    /// Strictly inside the positive chamber.
    pub fn is_regular_dominant(&self, mu: &[BigRational]) -> bool {
        self.simple_coroots.iter().all(|c| {
            let p = mu.iter().zip(c).fold(BigRational::zero(), |acc, (x, &y)| acc + x * BigRational::from_integer(y.into()));
            p.is_positive()
        })
    }

    pub fn simple_reflections(&self) -> Vec<IntMatrix> {
        self.simple_roots.iter().zip(&self.simple_coroots).map(|(a, c)| reflection(a, c)).collect()
    }

    /// Coefficients of `v` in the basis of simple roots, if `v` lies in their span.
    pub fn simple_root_coefficients(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        if self.simple_roots.is_empty() {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let cols: Vec<Vec<BigRational>> = (0..self.rank)
            .map(|r| self.simple_roots.iter().map(|a| BigRational::from_integer(a[r].into())).collect())
            .collect();
        linalg::solve(&cols, v)
    }

    fn compute_positive_roots(&self) -> Result<Vec<Vec<i64>>> {
        let reflections = self.simple_reflections();
        let mut seen: BTreeSet<Vec<i64>> = self.simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = seen.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for m in &reflections {
                let image: Vec<i64> = m.iter().map(|row| pair(row, &r)).collect();
                if seen.insert(image.clone()) {
                    if seen.len() > 4 * WEYL_GROUP_CAP {
                        return Err(Error::WeylGroupTooLarge { cap: WEYL_GROUP_CAP });
                    }
                    queue.push_back(image);
                }
            }
        }
        let mut positive = Vec::new();
        for r in seen {
            let q: Vec<BigRational> = r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            let coeffs = self.simple_root_coefficients(&q).expect("roots lie in the root span");
            if coeffs.iter().all(|c| !c.is_negative()) {
                positive.push(r);
            } else if !coeffs.iter().all(|c| !c.is_positive()) {
                return Err(Error::InvalidRootDatum("a root has mixed-sign coefficients".into()));
            }
        }
        // by height, then simple roots in their given order
        positive.sort_by_cached_key(|r| {
            let q: Vec<BigRational> = r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            let coeffs = self.simple_root_coefficients(&q).unwrap();
            let height = coeffs.iter().fold(BigRational::zero(), |a, b| a + b);
            (height, std::cmp::Reverse(coeffs))
        });
        Ok(positive)
    }

    /// Weyl group, generated by simple reflections, at most `cap` elements.
    pub fn weyl_group_capped(&self, cap: usize) -> Result<Vec<WeylElement>> {
        let identity: IntMatrix = (0..self.rank).map(|i| (0..self.rank).map(|j| i64::from(i == j)).collect()).collect();
        let reflections = self.simple_reflections();
        let mut seen: BTreeSet<IntMatrix> = BTreeSet::from([identity.clone()]);
        let mut order = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(w) = queue.pop_front() {
            for s in &reflections {
                let next = matmul(s, &w);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(Error::WeylGroupTooLarge { cap });
                    }
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(order.into_iter().map(|m| WeylElement { sign: linalg::det_int(&m), matrix: m }).collect())
    }

    pub fn weyl_group(&self) -> Result<Vec<WeylElement>> {
        self.weyl_group_capped(WEYL_GROUP_CAP)
    }

    /// A positive definite `W`-invariant form `Σ_w wᵀw` on weight coordinates.
    pub fn invariant_form(&self) -> Result<Vec<Vec<BigRational>>> {
        let mut q = vec![vec![0i64; self.rank]; self.rank];
        for w in self.weyl_group()? {
            for i in 0..self.rank {
                for j in 0..self.rank {
                    q[i][j] += (0..self.rank).map(|k| w.matrix[k][i] * w.matrix[k][j]).sum::<i64>();
                }
            }
        }
        Ok(linalg::to_rational(&q))
    }

    /// The dominant element of the `W`-orbit of `v`.
    pub fn dominant_conjugate(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        'outer: loop {
            for (a, c) in self.simple_roots.iter().zip(&self.simple_coroots) {
                let p = pair(&v, c);
                if p < 0 {
                    for (x, y) in v.iter_mut().zip(a) {
                        *x -= p * y;
                    }
                    continue 'outer;
                }
            }
            return v;
        }
    }
}
