use num_traits::{One, Zero};

use super::{ExactError, QPoly, Rat};

/// Truncated expansion Σ_{l ≤ L} s_l m^{−l}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvSeries {
    coeffs: Vec<Rat>,
}

impl InvSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> Rat {
        self.coeffs.get(l).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn partial_sum(&self, m: &Rat) -> Rat {
        let u = Rat::one() / m;
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * &u + c)
    }
}

/// Large-`m` expansion of `numer/denom`, by long division in `u = 1/m`.
pub fn series_of_ratio(numer: &QPoly, denom: &QPoly, order: usize) -> Result<InvSeries, ExactError> {
    let dd = denom.degree().ok_or(ExactError::ZeroDenominator)?;
    if let Some(nd) = numer.degree() {
        if nd > dd {
            return Err(ExactError::DegreeMismatch { numer: nd, denom: dd });
        }
    }
    // numer/denom = Ñ(u)/D̃(u) with Ñ_i = numer_{dd−i}, D̃_i = denom_{dd−i}
    let rev = |p: &QPoly, i: usize| if i <= dd { p.coeff(dd - i) } else { Rat::zero() };
    let d0_inv = Rat::one() / denom.leading().unwrap();
    let mut s: Vec<Rat> = Vec::with_capacity(order + 1);
    for l in 0..=order {
        let mut acc = rev(numer, l);
        for i in 1..=l.min(dd) {
            acc -= rev(denom, i) * &s[l - i];
        }
        s.push(acc * &d0_inv);
    }
    Ok(InvSeries { coeffs: s })
}
