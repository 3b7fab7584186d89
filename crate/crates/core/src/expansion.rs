//! Large-m expansion of the normalized weight, the triangular system for the
//! virtual bundle coefficients, and the exact telescoping identities.
//!
//! Everything here is written with P_{k,l} = Δᵏ(mˡ). Alternating sums of the
//! form Σ_i (−1)^i C(K,i) f(m+i) equal (−1)^K Δ^K f(m), so written in that
//! display form the virtual bundle layers pick up K-dependent signs; combined
//! with the coefficients solved in the same display form they differ from the
//! Δ-consistent quantities by one global factor, [`FROZEN_SIGN`].

use serde::Serialize;
use thiserror::Error;

use crate::exact::{
    binomial, elementary_symmetric, factorial, p_poly, series_of_ratio, sign_pow, ExactError,
    QPoly, QRatFun, Rat,
};
use crate::weights::WeightPolynomial;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("level l = {l} exceeds n + 1 = {max}")]
    LevelOutOfRange { l: usize, max: usize },
    #[error("Hilbert polynomial must have degree n = {n} and positive leading coefficient")]
    BadHilbertPolynomial { n: usize },
    #[error("pole of q at m = {m}")]
    PoleAtM { m: String },
    #[error("sheaf exponent for k = {k}: definition gives {definition}, proof chain gives {chain}")]
    MismatchBeyondSign { k: usize, definition: String, chain: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Relates the display-form alternating sums to the Δ-consistent ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> Rat {
        match self {
            Sign::Plus => Rat::one(),
            Sign::Minus => -Rat::one(),
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

pub const FROZEN_SIGN: Sign = Sign::Minus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientTable {
    pub n: usize,
    /// a_k, coefficient of m^k in the normalized weight, k = 0..=n+1
    #[serde(with = "crate::exact::serde_rat::vec")]
    pub a: Vec<Rat>,
    /// b_j with mχ(m) = Σ_j b_j m^{j+1}, j = 0..=n
    #[serde(with = "crate::exact::serde_rat::vec")]
    pub b: Vec<Rat>,
    /// F_l, l = 0..=n+1
    #[serde(rename = "F", with = "crate::exact::serde_rat::vec")]
    pub f: Vec<Rat>,
    /// c[l][k] = coefficient of m^{−l} in m^k/(mχ(m)); zero for k < n+1−l
    #[serde(serialize_with = "crate::exact::serde_rat::matrix::serialize")]
    pub c: Vec<Vec<Rat>>,
}

impl CoefficientTable {
    /// Σ_k c_{l,k} a_k.
    pub fn reconstruct(&self, l: usize) -> Rat {
        self.c[l]
            .iter()
            .zip(&self.a)
            .fold(Rat::zero(), |acc, (c, a)| acc + c * a)
    }
}

fn check_chi(chi: &QPoly, n: usize) -> Result<QPoly, ExpansionError> {
    if chi.degree() != Some(n) || !chi.leading().unwrap().is_positive() {
        return Err(ExpansionError::BadHilbertPolynomial { n });
    }
    Ok(chi.mul_var_pow(1))
}

/// c[l][k] for 0 ≤ l, k ≤ n+1.
pub fn c_matrix(chi: &QPoly, n: usize) -> Result<Vec<Vec<Rat>>, ExpansionError> {
    let mchi = check_chi(chi, n)?;
    let mut c = vec![vec![Rat::zero(); n + 2]; n + 2];
    for k in 0..=n + 1 {
        let s = series_of_ratio(&QPoly::monomial(Rat::one(), k), &mchi, n + 1)?;
        for (l, row) in c.iter_mut().enumerate() {
            row[k] = s.coeff(l);
        }
    }
    Ok(c)
}

pub fn expand_polynomial(normalized: &QPoly, chi: &QPoly, n: usize) -> Result<CoefficientTable, ExpansionError> {
    let mchi = check_chi(chi, n)?;
    let s = series_of_ratio(normalized, &mchi, n + 1)?;
    Ok(CoefficientTable {
        n,
        a: (0..=n + 1).map(|k| normalized.coeff(k)).collect(),
        b: (0..=n).map(|j| chi.coeff(j)).collect(),
        f: s.coeffs().to_vec(),
        c: c_matrix(chi, n)?,
    })
}

pub fn expand_f(w: &WeightPolynomial, chi: &QPoly, n: usize) -> Result<CoefficientTable, ExpansionError> {
    expand_polynomial(&w.normalized, chi, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSolution {
    pub l: usize,
    pub n: usize,
    /// [q_{n+1}, q_n, …, q_{n+1−l}]
    pub q: Vec<QRatFun>,
}

impl QSolution {
    /// q_K for n+1−l ≤ K ≤ n+1.
    pub fn q_of(&self, big_k: usize) -> &QRatFun {
        &self.q[self.n + 1 - big_k]
    }

    /// Row k of the system: Σ_j P_{n+1−j,k} q_{n+1−j}.
    pub fn row(&self, k: usize) -> QRatFun {
        let mut acc = QRatFun::zero();
        for j in 0..=self.l {
            let big_k = self.n + 1 - j;
            let p = QRatFun::from_poly(p_poly(big_k, k));
            acc = &acc + &(&p * &self.q[j]);
        }
        acc
    }
}

fn check_level(n: usize, l: usize) -> Result<(), ExpansionError> {
    if l > n + 1 {
        return Err(ExpansionError::LevelOutOfRange { l, max: n + 1 });
    }
    Ok(())
}

/// Back substitution in the upper triangular system with diagonal P_{K,K} = K!.
pub fn solve_q(chi: &QPoly, n: usize, l: usize) -> Result<QSolution, ExpansionError> {
    check_level(n, l)?;
    let c = c_matrix(chi, n)?;
    let mut q = vec![QRatFun::zero(); l + 1];
    for i in (0..=l).rev() {
        let k = n + 1 - i;
        let mut rhs = QRatFun::constant(c[l][k].clone());
        for (j, qj) in q.iter().enumerate().skip(i + 1) {
            let p = QRatFun::from_poly(p_poly(n + 1 - j, k));
            rhs = &rhs - &(&p * qj);
        }
        let diag = Rat::from_integer(factorial(k));
        q[i] = &rhs * &(Rat::one() / diag);
    }
    Ok(QSolution { l, n, q })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirtualBundleTerm {
    pub offset: usize,
    #[serde(with = "crate::exact::serde_rat")]
    pub multiplicity: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirtualBundle {
    pub l: usize,
    pub m: i64,
    pub terms: Vec<VirtualBundleTerm>,
}

impl VirtualBundle {
    /// Σ_i mult_i f(m + i).
    pub fn pair(&self, mut f: impl FnMut(i64) -> Rat) -> Rat {
        self.terms
            .iter()
            .fold(Rat::zero(), |acc, t| acc + &t.multiplicity * f(self.m + t.offset as i64))
    }
}

fn eval_q(q: &QRatFun, m: &Rat) -> Result<Rat, ExpansionError> {
    q.eval(m).map_err(|_| ExpansionError::PoleAtM { m: m.to_string() })
}

/// Multiplicities of L^{m+i}: `sign` × Σ_j (−1)^i C(K,i) q^disp_K(m) with
/// K = n+1−j and q^disp_K = (−1)^{K+1} q_K the display-form solution.
pub fn virtual_bundle(chi: &QPoly, n: usize, l: usize, m: i64, sign: Sign) -> Result<VirtualBundle, ExpansionError> {
    let sol = solve_q(chi, n, l)?;
    virtual_bundle_from(&sol, m, sign)
}

pub fn virtual_bundle_from(sol: &QSolution, m: i64, sign: Sign) -> Result<VirtualBundle, ExpansionError> {
    let n = sol.n;
    let mr = Rat::from_integer(m.into());
    let mut mult = vec![Rat::zero(); n + 2];
    for j in 0..=sol.l {
        let big_k = n + 1 - j;
        let q_disp = sign_pow(big_k + 1) * eval_q(&sol.q[j], &mr)?;
        for (i, slot) in mult.iter_mut().enumerate().take(big_k + 1) {
            *slot += sign_pow(i) * Rat::from_integer(binomial(big_k, i)) * &q_disp;
        }
    }
    let s = sign.value();
    Ok(VirtualBundle {
        l: sol.l,
        m,
        terms: mult
            .into_iter()
            .enumerate()
            .map(|(offset, x)| VirtualBundleTerm {
                offset,
                multiplicity: x * &s,
            })
            .collect(),
    })
}

/// Σ_i mult_i (m+i)χ(m+i): one for l = 0 and zero otherwise under [`FROZEN_SIGN`].
pub fn prop1_scalar(chi: &QPoly, n: usize, l: usize, m: i64, sign: Sign) -> Result<Rat, ExpansionError> {
    let vb = virtual_bundle(chi, n, l, m, sign)?;
    Ok(vb.pair(|x| {
        let xr = Rat::from_integer(x.into());
        chi.eval(&xr) * xr
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafExponent {
    pub k: usize,
    /// Δ-consistent exponent of M_k
    #[serde(with = "crate::exact::serde_rat")]
    pub exponent: Rat,
    /// (1/k!) Σ_j (−1)^{j+1} σ_j(1..k−1) c_{l,k−j}, as displayed
    #[serde(with = "crate::exact::serde_rat")]
    pub definition: Rat,
    /// Σ_p Σ_j (1/k!) (−1)^j σ_j P_{n+1−p,k−j}(m) q_{n+1−p}(m)
    #[serde(serialize_with = "ser_ratfun")]
    pub chain: QRatFun,
    /// Same as `definition` with σ_{j+1} in place of σ_j
    #[serde(with = "crate::exact::serde_rat")]
    pub shifted_index: Rat,
}

fn ser_ratfun<S: serde::Serializer>(f: &QRatFun, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

/// Exponents of M_k for k = n+1−l..=n+1, computed from the closed form and
/// from the proof chain; errors unless definition = sign × chain with the chain
/// constant in m.
pub fn sheaf_exponents(chi: &QPoly, n: usize, l: usize, sign: Sign) -> Result<Vec<SheafExponent>, ExpansionError> {
    let sol = solve_q(chi, n, l)?;
    let c = c_matrix(chi, n)?;
    let c_at = |k: isize| -> Rat {
        if k < 0 {
            Rat::zero()
        } else {
            c[l][k as usize].clone()
        }
    };
    let mut out = Vec::new();
    for k in n + 1 - l..=n + 1 {
        let vals: Vec<Rat> = (1..k as i64).map(|x| Rat::from_integer(x.into())).collect();
        let sigma = |j: usize| elementary_symmetric(j, &vals).unwrap_or_else(|_| Rat::zero());
        let kf = Rat::one() / Rat::from_integer(factorial(k));
        let mut definition = Rat::zero();
        let mut shifted_index = Rat::zero();
        let mut chain = QRatFun::zero();
        for j in 0..k {
            let ckj = c_at(k as isize - j as isize);
            definition += sign_pow(j + 1) * sigma(j) * &ckj * &kf;
            shifted_index += sign_pow(j) * sigma(j + 1) * &ckj * &kf;
            for p in 0..=l {
                let p_k = QRatFun::from_poly(p_poly(n + 1 - p, k - j));
                let term = &(&p_k * &sol.q[p]) * &(sign_pow(j) * sigma(j) * &kf);
                chain = &chain + &term;
            }
        }
        let exponent = chain.as_constant();
        match exponent {
            Some(e) if definition == &e * sign.value() => out.push(SheafExponent {
                k,
                exponent: e,
                definition,
                chain,
                shifted_index,
            }),
            _ => {
                return Err(ExpansionError::MismatchBeyondSign {
                    k,
                    definition: definition.to_string(),
                    chain: chain.to_string(),
                })
            }
        }
    }
    Ok(out)
}
