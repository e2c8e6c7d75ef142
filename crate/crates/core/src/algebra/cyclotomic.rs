use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::linalg;
use crate::{Error, Result};

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
///
/// Computed by exact division of `x^n - 1` by `Φ_d` for every proper divisor
/// `d` of `n`, and memoized process-wide.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigRational>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let hit = cache.lock().unwrap().get(&n).cloned();
    if let Some(p) = hit {
        return p;
    }
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = divide_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Exact quotient of `a` by the monic polynomial `b` (remainder must vanish).
fn divide_monic(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= &c * bj;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Reduces `p` modulo the monic `modulus`, returning exactly `deg(modulus)` coefficients.
fn reduce(mut p: Vec<BigRational>, modulus: &[BigRational]) -> Vec<BigRational> {
    let deg = modulus.len() - 1;
    for i in (deg..p.len()).rev() {
        let c = std::mem::take(&mut p[i]);
        if c.is_zero() {
            continue;
        }
        for (j, mj) in modulus.iter().enumerate().take(deg) {
            p[i - deg + j] -= &c * mj;
        }
    }
    p.resize(deg, BigRational::zero());
    p
}

/// Element of the cyclotomic field `Q(ζ_n)`, stored in the power basis of
/// `ζ_n = e^{2πi/n}` modulo the `n`-th cyclotomic polynomial.
///
/// Elements of different orders combine by embedding both operands into the
/// field of order `lcm`. `Zero`/`One` live in order 1, i.e. in `Q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cyclotomic {
    order: u64,
    #[serde(with = "rational_strings")]
    coeffs: Vec<BigRational>,
}

mod rational_strings {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|q| q.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| crate::algebra::parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl Cyclotomic {
    /// Element `Σ poly[k] ζ_n^k`; `poly` may have any length.
    pub fn from_poly(order: u64, poly: Vec<BigRational>) -> Self {
        let modulus = cyclotomic_polynomial(order);
        Self { order, coeffs: reduce(poly, &modulus) }
    }

    pub fn from_rational_in(order: u64, q: BigRational) -> Self {
        Self::from_poly(order, vec![q])
    }

    /// `ζ_n^exponent` for any integer exponent.
    pub fn root_of_unity(order: u64, exponent: i64) -> Self {
        let e = exponent.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(order, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Image in `Q(ζ_target)` under `ζ_n ↦ ζ_target^{target/n}`.
    pub fn embed(&self, target: u64) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::NonDivisibleOrder { root_order: self.order, target_order: target });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(Self::from_poly(target, poly))
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn lift_pair(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let l = self.order.lcm(&other.order);
        (self.embed(l).unwrap(), other.embed(l).unwrap())
    }
}

/// Image of `e^{2πi·exponent/root_order}` in the cyclotomic field of `target_order`.
pub fn cyclotomic_embed(root_order: u64, exponent: i64, target_order: u64) -> Result<Cyclotomic> {
    if root_order == 0 || target_order == 0 || !target_order.is_multiple_of(root_order) {
        return Err(Error::NonDivisibleOrder { root_order, target_order });
    }
    Cyclotomic::root_of_unity(root_order, exponent).embed(target_order)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.lift_pair(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self { order: 1, coeffs: vec![BigRational::zero()] }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self { order: 1, coeffs: vec![BigRational::one()] }
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.lift_pair(rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic { order: a.order, coeffs }
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.lift_pair(rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Cyclotomic { order: a.order, coeffs }
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.lift_pair(rhs);
        if a.coeffs.len() == 1 {
            return Cyclotomic { order: a.order, coeffs: vec![&a.coeffs[0] * &b.coeffs[0]] };
        }
        let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        Cyclotomic::from_poly(a.order, prod)
    }
}

impl Field for Cyclotomic {
    fn from_rational(q: &BigRational) -> Self {
        Self { order: 1, coeffs: vec![q.clone()] }
    }

    fn scale(&self, q: &BigRational) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Solve (multiplication-by-self) u = 1 in the power basis.
        let deg = self.coeffs.len();
        let mut columns = Vec::with_capacity(deg);
        for j in 0..deg {
            let col = self * &Cyclotomic::root_of_unity(self.order, j as i64);
            columns.push(col.coeffs);
        }
        let matrix: Vec<Vec<BigRational>> =
            (0..deg).map(|i| (0..deg).map(|j| columns[j][i].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); deg];
        rhs[0] = BigRational::one();
        linalg::solve(&matrix, &rhs).map(|coeffs| Cyclotomic { order: self.order, coeffs })
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.order)?,
                _ => write!(f, "({c})·ζ{}^{k}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, rational};

    fn int_coeffs(n: u64) -> Vec<i64> {
        cyclotomic_polynomial(n)
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(int_coeffs(1), vec![-1, 1]);
        assert_eq!(int_coeffs(2), vec![1, 1]);
        assert_eq!(int_coeffs(4), vec![1, 0, 1]);
        assert_eq!(int_coeffs(6), vec![1, -1, 1]);
        assert_eq!(int_coeffs(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn embed_examples() {
        assert_eq!(cyclotomic_embed(1, 0, 4).unwrap(), Cyclotomic::one());
        assert_eq!(cyclotomic_embed(2, 1, 2).unwrap().as_rational(), Some(integer(-1)));
        let i = cyclotomic_embed(4, 1, 4).unwrap();
        assert_eq!(i.coeffs(), &[integer(0), integer(1)]);
        assert_eq!((&i * &i).as_rational(), Some(integer(-1)));
        assert!(matches!(cyclotomic_embed(4, 1, 6), Err(Error::NonDivisibleOrder { .. })));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = (0..3).fold(Cyclotomic::zero(), |acc, k| acc + Cyclotomic::root_of_unity(3, k));
        assert!(s.is_zero());
        let w = Cyclotomic::root_of_unity(6, 1);
        let w6 = (0..6).fold(Cyclotomic::one(), |acc, _| acc * w.clone());
        assert_eq!(w6, Cyclotomic::one());
    }

    #[test]
    fn inverse_is_exact() {
        let x = Cyclotomic::from_poly(5, vec![integer(2), rational(-1, 3), integer(0), integer(7)]);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Cyclotomic::one());
        assert!(Cyclotomic::zero().inverse().is_none());
    }

    #[test]
    fn mixed_orders_compare_in_common_field() {
        let minus_one = Cyclotomic::root_of_unity(2, 1);
        let z4 = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(&z4 * &z4, minus_one);
        assert_eq!(Cyclotomic::root_of_unity(6, 3), minus_one);
    }
}
