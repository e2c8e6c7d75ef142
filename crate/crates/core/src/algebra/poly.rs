use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::Field;
use super::series::TruncatedSeries;
use crate::{Error, Result};

pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial in `dim` variables. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<T> {
    dim: usize,
    terms: BTreeMap<Exponent, T>,
}

/// All exponents in `dim` variables of total degree at most `degree`, graded
/// then lexicographic.
pub fn monomials_up_to(dim: usize, degree: usize) -> Vec<Exponent> {
    fn rec(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == dim {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(dim, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in 0..=degree as u32 {
        rec(dim, total, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

fn binomial(n: u32, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
    }
    acc
}

impl<T: Field> MultiPoly<T> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `v_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::from_terms(dim, [(e, T::one())])
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Exponent, T)>) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must match dimension");
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as usize).max().unwrap_or(0)
    }

    pub fn coeff(&self, e: &[u32]) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(e, x)| (e.clone(), c.clone() * x.clone())))
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(e, x)| (e.clone(), x.scale(q))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> T {
        assert_eq!(point.len(), self.dim);
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut mono = BigRational::one();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    mono *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc = acc + c.scale(&mono);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c.scale(&BigRational::from_integer(e[i].into())));
        }
        out
    }

    /// Directional derivative `∂_v`.
    pub fn directional_derivative(&self, v: &[i64]) -> Self {
        let mut out = Self::zero(self.dim);
        for (i, &vi) in v.iter().enumerate() {
            if vi != 0 {
                out = &out + &self.partial(i).scale_rational(&BigRational::from_integer(vi.into()));
            }
        }
        out
    }

    /// The polynomial `v ↦ p(v - a)`.
    pub fn shifted(&self, a: &[BigRational]) -> Self {
        assert_eq!(a.len(), self.dim);
        if a.iter().all(Zero::is_zero) {
            return self.clone();
        }
        // per-variable expansions of (v_i - a_i)^k
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let mut partial: Vec<(Exponent, BigRational)> = vec![(vec![0; self.dim], BigRational::one())];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let neg_a = -a[i].clone();
                let mut next = Vec::with_capacity(partial.len() * (k as usize + 1));
                for j in 0..=k {
                    let w = binomial(k, j) * num_traits::pow(neg_a.clone(), (k - j) as usize);
                    if w.is_zero() {
                        continue;
                    }
                    for (pe, pc) in &partial {
                        let mut ne = pe.clone();
                        ne[i] = j;
                        next.push((ne, pc * &w));
                    }
                }
                partial = next;
            }
            for (pe, pc) in partial {
                out.add_term(pe, c.scale(&pc));
            }
        }
        out
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> MultiPoly<U> {
        MultiPoly::from_terms(self.dim, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Integral over the interval `[lo, hi]`; one-variable polynomials only.
    pub fn integrate_interval(&self, lo: &BigRational, hi: &BigRational) -> T {
        assert_eq!(self.dim, 1, "interval integration needs a univariate polynomial");
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let k = e[0] as usize + 1;
            let kq = BigRational::from_integer(k.into());
            let w = (num_traits::pow(hi.clone(), k) - num_traits::pow(lo.clone(), k)) / kq;
            acc = acc + c.scale(&w);
        }
        acc
    }
}

impl<T: Field> Add for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn add(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Field> Sub for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn sub(self, rhs: &MultiPoly<T>) -> MultiPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<T: Field> Neg for &MultiPoly<T> {
    type Output = MultiPoly<T>;
    fn neg(self) -> MultiPoly<T> {
        self.map(|c| -c.clone())
    }
}

/// Applies `Π_j S_j(∂_{v_j})` to `p`, where each factor is a truncated series
/// `S_j` evaluated at the directional derivative along `v_j`.
///
/// Every factor must be truncated at an order at least the degree of `p`;
/// higher derivatives vanish so the result is exact.
pub fn apply_operator_product<T: Field>(
    factors: &[(TruncatedSeries<T>, Vec<i64>)],
    p: &MultiPoly<T>,
) -> Result<MultiPoly<T>> {
    let degree = p.total_degree();
    let mut current = p.clone();
    for (series, direction) in factors {
        if direction.len() != p.dim() {
            return Err(Error::DimensionMismatch { expected: p.dim(), found: direction.len() });
        }
        if series.order() < degree {
            return Err(Error::InsufficientTruncation { order: series.order(), degree });
        }
        let mut acc = current.scale(&series.coeff(0));
        let mut deriv = current.clone();
        for k in 1..=degree {
            deriv = deriv.directional_derivative(direction);
            if deriv.is_zero() {
                break;
            }
            let c = series.coeff(k);
            if !c.is_zero() {
                acc = &acc + &deriv.scale(&c);
            }
        }
        current = acc;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ahat_factor_series, integer, rational};

    type P = MultiPoly<BigRational>;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(1, 3).len(), 4);
        assert_eq!(monomials_up_to(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn shift_matches_pointwise_evaluation() {
        let p = P::from_terms(2, [(vec![2, 1], integer(3)), (vec![0, 1], rational(-1, 2)), (vec![0, 0], integer(5))]);
        let a = vec![rational(1, 3), integer(-2)];
        let q = p.shifted(&a);
        let x = vec![rational(7, 5), rational(-3, 4)];
        let xa: Vec<_> = x.iter().zip(&a).map(|(u, v)| u - v).collect();
        assert_eq!(q.eval(&x), p.eval(&xa));
    }

    #[test]
    fn operator_examples() {
        // (1 - x²/24) along e1 applied to v1² gives v1² - 1/12.
        let v1sq = P::from_terms(1, [(vec![2], integer(1))]);
        let series = TruncatedSeries::new(vec![integer(1), integer(0), rational(-1, 24)], 2);
        let out = apply_operator_product(&[(series, vec![1])], &v1sq).unwrap();
        assert_eq!(out, P::from_terms(1, [(vec![2], integer(1)), (vec![0], rational(-1, 12))]));

        // Â([1,1]) on the tent piece 1 - v is the identity.
        let tent = P::from_terms(1, [(vec![0], integer(1)), (vec![1], integer(-1))]);
        let a = ahat_factor_series(1);
        let out = apply_operator_product(&[(a.clone(), vec![1]), (a, vec![1])], &tent).unwrap();
        assert_eq!(out, tent);
    }

    #[test]
    fn operator_needs_enough_terms() {
        let cubic = P::from_terms(1, [(vec![3], integer(1))]);
        let err = apply_operator_product(&[(ahat_factor_series(2), vec![1])], &cubic).unwrap_err();
        assert_eq!(err, Error::InsufficientTruncation { order: 2, degree: 3 });
    }
}
