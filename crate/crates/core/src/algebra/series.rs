use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::Field;
use crate::{Error, Result};

/// Power series in one variable, exact through `x^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Field> TruncatedSeries<T> {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients are kept.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Self { coeffs: (0..=order).map(f).collect() }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![T::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| self.coeffs[k].clone() + other.coeffs[k].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| {
            (0..=k).fold(T::zero(), |acc, i| {
                acc + self.coeffs[i].clone() * other.coeffs[k - i].clone()
            })
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| c.clone() * x.clone()).collect() }
    }

    /// Multiplicative inverse; `None` when the constant term is zero.
    pub fn inverse(&self) -> Option<Self> {
        let inv0 = self.coeffs[0].inverse()?;
        let mut out: Vec<T> = vec![inv0.clone()];
        for k in 1..=self.order() {
            let s = (1..=k).fold(T::zero(), |acc, i| {
                acc + self.coeffs[i].clone() * out[k - i].clone()
            });
            out.push(-(s * inv0.clone()));
        }
        Some(Self { coeffs: out })
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

fn factorial(k: usize) -> BigRational {
    (1..=k).fold(BigRational::one(), |acc, i| acc * BigRational::from_integer(i.into()))
}

fn half_power(k: usize) -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(k as u32))
}

/// Series of `x / (e^{x/2} - e^{-x/2})`, the one-weight factor of `Â(Φ)`.
pub fn ahat_factor_series(order: usize) -> TruncatedSeries<BigRational> {
    // sinh(x/2)/(x/2) = Σ (x/2)^{2j} / (2j+1)!
    let sinhc = TruncatedSeries::from_fn(order, |k| {
        if k % 2 == 1 {
            BigRational::zero()
        } else {
            half_power(k) / factorial(k + 1)
        }
    });
    sinhc.inverse().expect("constant term is 1")
}

/// Series of `(1 - c) / (e^{-x/2} - c·e^{x/2})`, the factor of `E(s,Φ)` for a
/// weight `α` with `c = s^{-α} ≠ 1` and `x = ∂_α`.
pub fn e_factor_series<T: Field>(c: &T, order: usize) -> Result<TruncatedSeries<T>> {
    if *c == T::one() {
        return Err(Error::TrivialCharacter);
    }
    let denominator = TruncatedSeries::from_fn(order, |k| {
        let plus = half_power(k) / factorial(k);
        let minus = if k % 2 == 0 { plus.clone() } else { -plus.clone() };
        T::from_rational(&minus) - c.scale(&plus)
    });
    let one_minus_c = T::one() - c.clone();
    let inv = denominator.inverse().ok_or(Error::TrivialCharacter)?;
    Ok(inv.scale(&one_minus_c))
}
