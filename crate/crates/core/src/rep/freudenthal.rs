use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::root::RootDatum;
use crate::boxspline::MultiplicityFunction;
use crate::{Error, Result};

fn form(q: &[Vec<BigRational>], a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            acc += ai * &q[i][j] * bj;
        }
    }
    acc
}

fn to_q(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Depth of `μ` below `λ`, i.e. the height of `λ - μ`, if `λ - μ` is a
/// nonnegative integer combination of simple roots.
fn depth(g: &RootDatum, lambda: &[i64], mu: &[i64]) -> Option<i64> {
    let diff: Vec<BigRational> = lambda.iter().zip(mu).map(|(a, b)| BigRational::from_integer((a - b).into())).collect();
    let coeffs = g.simple_root_coefficients(&diff)?;
    if coeffs.iter().any(|c| c.is_negative() || !c.is_integer()) {
        return None;
    }
    Some(coeffs.iter().map(|c| i64::try_from(c.to_integer()).unwrap()).sum())
}

/// Dominant weights of the irreducible representation of highest weight `λ`,
/// ordered by depth. The full weight set is connected under subtraction of
/// simple roots, so it is walked first and then filtered.
fn dominant_weights(g: &RootDatum, lambda: &[i64]) -> Vec<(i64, Vec<i64>)> {
    let mut seen = BTreeSet::from([lambda.to_vec()]);
    let mut queue = VecDeque::from([lambda.to_vec()]);
    let mut out = Vec::new();
    while let Some(mu) = queue.pop_front() {
        if g.is_dominant(&mu) {
            out.push((depth(g, lambda, &mu).unwrap(), mu.clone()));
        }
        for a in g.simple_roots() {
            let next: Vec<i64> = mu.iter().zip(a).map(|(x, y)| x - y).collect();
            if seen.contains(&next) {
                continue;
            }
            if depth(g, lambda, &g.dominant_conjugate(&next)).is_some() {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    out.sort();
    out
}

/// Weight multiplicities of the irreducible representation with highest
/// weight `λ`, by Freudenthal's recursion on dominant weights.
pub fn weight_multiplicities(g: &RootDatum, highest: &[i64]) -> Result<MultiplicityFunction> {
    if highest.len() != g.rank() {
        return Err(Error::DimensionMismatch { expected: g.rank(), found: highest.len() });
    }
    if !g.is_dominant(highest) {
        return Err(Error::NonDominant);
    }
    let q = g.invariant_form()?;
    let rho = g.rho();
    let shifted = |v: &[i64]| -> Vec<BigRational> { to_q(v).iter().zip(rho).map(|(a, b)| a + b).collect() };
    let lr = shifted(highest);
    let top = form(&q, &lr, &lr);
    let roots: Vec<(Vec<i64>, Vec<BigRational>)> = g.positive_roots().iter().map(|r| (r.clone(), to_q(r))).collect();

    let mut dominant: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (d, mu) in dominant_weights(g, highest) {
        if d == 0 {
            dominant.insert(mu, BigRational::one());
            continue;
        }
        let mut numerator = BigRational::zero();
        for (r, rq) in &roots {
            let mut k = 1;
            loop {
                let next: Vec<i64> = mu.iter().zip(r).map(|(x, y)| x + k * y).collect();
                let dom = g.dominant_conjugate(&next);
                let Some(m) = dominant.get(&dom) else { break };
                numerator += m * form(&q, &to_q(&next), rq);
                k += 1;
            }
        }
        let mr = shifted(&mu);
        let denominator = &top - form(&q, &mr, &mr);
        let m = numerator * BigRational::from_integer(2.into()) / denominator;
        debug_assert!(m.is_integer());
        dominant.insert(mu, m);
    }

    let w = g.weyl_group()?;
    let mut out = MultiplicityFunction::zero(g.rank());
    for (mu, m) in &dominant {
        let orbit: BTreeSet<Vec<i64>> = w.iter().map(|e| e.apply(mu)).collect();
        for v in orbit {
            out.set_lattice(v, m.clone());
        }
    }
    Ok(out)
}

/// `Π_{β>0} (λ+ρ, β) / (ρ, β)`.
pub fn weyl_dimension(g: &RootDatum, highest: &[i64]) -> Result<BigRational> {
    if !g.is_dominant(highest) {
        return Err(Error::NonDominant);
    }
    let q = g.invariant_form()?;
    let rho = g.rho();
    let lr: Vec<BigRational> = to_q(highest).iter().zip(rho).map(|(a, b)| a + b).collect();
    Ok(g.positive_roots().iter().fold(BigRational::one(), |acc, beta| {
        let b = to_q(beta);
        acc * form(&q, &lr, &b) / form(&q, rho, &b)
    }))
}
