use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Cyclotomic, Field};
use crate::lattice::{require_vertex, TorusPoint, WeightList};
use crate::Result;

/// `B_c(s,Φ)` written as a combination of translates of `B_c(Φ_s)`:
/// `Σ coefficient · δ_shift * B_c(Φ_s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedBoxExpansion {
    pub sublist: WeightList,
    pub terms: Vec<(Cyclotomic, Vec<BigRational>)>,
}

impl TwistedBoxExpansion {
    /// Terms with equal shifts combined, zero coefficients dropped, sorted by shift.
    pub fn merged(&self) -> Vec<(Cyclotomic, Vec<BigRational>)> {
        let mut out: Vec<(Cyclotomic, Vec<BigRational>)> = Vec::new();
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));
        for (c, shift) in sorted {
            match out.last_mut() {
                Some((acc, last)) if *last == shift => *acc = acc.clone() + c,
                _ => out.push((c, shift)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        out
    }
}

/// Expands `Π_{α ∈ Φ∖Φ_s} (δ_{α/2} - s^{-α} δ_{-α/2}) / (1 - s^{-α})`.
pub fn twisted_expansion(s: &TorusPoint, phi: &WeightList) -> Result<TwistedBoxExpansion> {
    require_vertex(s, phi)?;
    let (sublist, moved) = s.split(phi)?;
    let dim = phi.dim();
    let half = BigRational::new(1.into(), 2.into());
    let mut terms = vec![(Cyclotomic::one(), vec![BigRational::zero(); dim])];
    for &i in &moved {
        let alpha = &phi.vectors()[i];
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        let c = s.character(&neg);
        let denom = (Cyclotomic::one() - c.clone()).inverse().expect("s^α ≠ 1 off Φ_s");
        let plus = denom.clone();
        let minus = -(c * denom);
        let step: Vec<BigRational> = alpha.iter().map(|&a| BigRational::from_integer(a.into()) * &half).collect();
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (coef, shift) in &terms {
            let up = shift.iter().zip(&step).map(|(a, b)| a + b).collect();
            let down = shift.iter().zip(&step).map(|(a, b)| a - b).collect();
            next.push((coef.clone() * plus.clone(), up));
            next.push((coef.clone() * minus.clone(), down));
        }
        terms = next;
    }
    Ok(TwistedBoxExpansion { sublist, terms })
}
