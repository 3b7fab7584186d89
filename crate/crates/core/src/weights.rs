//! Gieseker weights of Hilbert points under diagonal one-parameter subgroups.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{interpolate, ExactError, QPoly, Rat, SparseEchelon};
use crate::ideals::{
    enumerate_monomials, hilbert_function, hilbert_polynomial, kernel_basis, GradedKernelBasis,
    HilbertPolynomial, IdealError, MultiIndex, SchemeData,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight vector has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("found {found} independent monomials modulo the kernel, expected {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("cannot parse weight vector {0:?}")]
    Parse(String),
    #[error("empty scheme (zero Hilbert polynomial)")]
    EmptyScheme,
    #[error("weights did not become polynomial below degree {cap}")]
    NoStabilization { cap: u32 },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// λ(t)·e_j = t^{r_j} e_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OneParameterSubgroup {
    pub r: Vec<i64>,
}

impl OneParameterSubgroup {
    pub fn new(r: Vec<i64>) -> Self {
        OneParameterSubgroup { r }
    }

    pub fn identity(vars: usize) -> Self {
        OneParameterSubgroup { r: vec![0; vars] }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.r.iter().sum()
    }

    pub fn is_special_linear(&self) -> bool {
        self.sum() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.r.iter().all(|&x| x == self.r[0])
    }

    pub fn shifted(&self, c: i64) -> Self {
        OneParameterSubgroup::new(self.r.iter().map(|x| x + c).collect())
    }

    pub fn inverse(&self) -> Self {
        OneParameterSubgroup::new(self.r.iter().map(|x| -x).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        OneParameterSubgroup::new(perm.iter().map(|&p| self.r[p]).collect())
    }

    fn check(&self, vars: usize) -> Result<(), WeightError> {
        if self.r.len() != vars {
            return Err(WeightError::DimensionMismatch {
                expected: vars,
                got: self.r.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for OneParameterSubgroup {
    type Err = WeightError;

    /// `"1,0,-1"`
    fn from_str(s: &str) -> Result<Self, WeightError> {
        let r = s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| WeightError::Parse(s.to_string()))?;
        if r.is_empty() {
            return Err(WeightError::Parse(s.to_string()));
        }
        Ok(OneParameterSubgroup { r })
    }
}

impl fmt::Display for OneParameterSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn monomial_weight(lambda: &OneParameterSubgroup, mono: &MultiIndex) -> Result<i64, WeightError> {
    lambda.check(mono.vars())?;
    Ok(lambda
        .r
        .iter()
        .zip(mono.exponents())
        .map(|(r, &e)| r * e as i64)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinWeightBasis {
    pub monomials: Vec<MultiIndex>,
    pub weight: i64,
}

/// Monomials in ascending (weight, graded-lex position) order.
fn greedy_order(kernel: &GradedKernelBasis, lambda: &OneParameterSubgroup) -> Result<Vec<usize>, WeightError> {
    let weights = kernel
        .monomials
        .iter()
        .map(|m| monomial_weight(lambda, m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut order: Vec<usize> = (0..kernel.monomials.len()).collect();
    order.sort_by_key(|&i| (weights[i], i));
    Ok(order)
}

/// Cheapest set of monomials spanning S^m modulo the kernel.
///
/// The greedy rule accepts a monomial iff it is independent of the kernel and
/// of the monomials accepted before it. Those are exactly the non-pivot
/// columns of an echelon form of the kernel once the columns are ordered from
/// the last greedy candidate to the first, so one elimination suffices.
/// `expected` is χ(m) when known.
pub fn min_weight_basis(
    kernel: &GradedKernelBasis,
    lambda: &OneParameterSubgroup,
    expected: Option<usize>,
) -> Result<MinWeightBasis, WeightError> {
    let n = kernel.monomials.len();
    if let Some(first) = kernel.monomials.first() {
        lambda.check(first.vars())?;
    }
    let order = greedy_order(kernel, lambda)?;
    // position of each monomial in the reversed greedy order
    let mut pos = vec![0usize; n];
    for (rank, &i) in order.iter().enumerate() {
        pos[i] = n - 1 - rank;
    }
    let mut ech = SparseEchelon::new(n);
    for v in &kernel.vectors {
        let mut w: Vec<(usize, Rat)> = v.iter().map(|(c, x)| (pos[*c], x.clone())).collect();
        w.sort_by_key(|e| e.0);
        ech.insert(w);
    }
    let mut monomials = Vec::new();
    let mut weight = 0i64;
    for &i in &order {
        if !ech.is_pivot(pos[i]) {
            weight += monomial_weight(lambda, &kernel.monomials[i])?;
            monomials.push(kernel.monomials[i].clone());
        }
    }
    if let Some(expected) = expected {
        if monomials.len() != expected {
            return Err(WeightError::RankDeficient {
                expected,
                found: monomials.len(),
            });
        }
    }
    Ok(MinWeightBasis { monomials, weight })
}

/// w_λ(m). Monomial ideals use the standard monomials directly.
pub fn hilbert_weight(scheme: &SchemeData, lambda: &OneParameterSubgroup, m: u32) -> Result<i64, WeightError> {
    lambda.check(scheme.vars())?;
    if let SchemeData::Monomial(d) = scheme {
        return enumerate_monomials(scheme.vars(), m)
            .iter()
            .filter(|mono| !d.contains(mono))
            .map(|mono| monomial_weight(lambda, mono))
            .sum();
    }
    hilbert_weight_greedy(scheme, lambda, m)
}

/// w_λ(m) through the elimination route for every kind of input.
pub fn hilbert_weight_greedy(scheme: &SchemeData, lambda: &OneParameterSubgroup, m: u32) -> Result<i64, WeightError> {
    lambda.check(scheme.vars())?;
    let kernel = match kernel_basis(scheme, m) {
        Ok(k) => k,
        Err(IdealError::DegreeTooSmall { .. }) => GradedKernelBasis {
            degree: m,
            monomials: enumerate_monomials(scheme.vars(), m),
            vectors: Vec::new(),
        },
        Err(e) => return Err(e.into()),
    };
    Ok(min_weight_basis(&kernel, lambda, None)?.weight)
}

fn twist(lambda: &OneParameterSubgroup, vars: usize) -> Rat {
    Rat::new(lambda.sum().into(), (vars as i64).into())
}

/// w̃_λ(m) = w_λ(m) − m·χ(m)·Σr/(N+1).
pub fn normalized_weight(scheme: &SchemeData, lambda: &OneParameterSubgroup, m: u32) -> Result<Rat, WeightError> {
    let w = hilbert_weight(scheme, lambda, m)?;
    let chi = hilbert_function(scheme, m) as i64;
    let mchi = Rat::from_integer((m as i64 * chi).into());
    Ok(Rat::from_integer(w.into()) - mchi * twist(lambda, scheme.vars()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPolynomial {
    pub raw: QPoly,
    pub normalized: QPoly,
    pub stable_from: u32,
    pub samples: Vec<(u32, i64)>,
    pub hilbert: HilbertPolynomial,
}

pub const DEFAULT_WEIGHT_CAP: u32 = 40;

/// Interpolates w_λ(m) from n+2 consecutive degrees and confirms it on two
/// more, starting at the Hilbert polynomial's stable degree and moving up
/// until the samples agree. `degree_hint` overrides n = dim X.
pub fn weight_polynomial(
    scheme: &SchemeData,
    lambda: &OneParameterSubgroup,
    degree_hint: Option<usize>,
) -> Result<WeightPolynomial, WeightError> {
    lambda.check(scheme.vars())?;
    let hilbert = hilbert_polynomial(scheme)?;
    let n = degree_hint
        .or(hilbert.dimension())
        .ok_or(WeightError::EmptyScheme)?;
    let window = n as u32 + 4;
    let mut samples: Vec<(u32, i64)> = Vec::new();
    let mut next = hilbert.stable_from;
    for start in hilbert.stable_from..=DEFAULT_WEIGHT_CAP {
        let end = start + window - 1;
        if next <= end {
            let fresh: Vec<(u32, i64)> = (next..=end)
                .into_par_iter()
                .map(|m| hilbert_weight(scheme, lambda, m).map(|w| (m, w)))
                .collect::<Result<Vec<_>, _>>()?;
            samples.extend(fresh);
            next = end + 1;
        }
        let pts: Vec<(Rat, Rat)> = samples
            .iter()
            .filter(|(m, _)| *m >= start)
            .map(|&(m, w)| (Rat::from_integer(m.into()), Rat::from_integer(w.into())))
            .collect();
        let raw = match interpolate(&pts, n + 1) {
            Ok(p) => p,
            Err(ExactError::InconsistentSamples { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let mchi = hilbert.poly.mul_var_pow(1);
        let normalized = &raw - &mchi.scale(&twist(lambda, scheme.vars()));
        samples.retain(|(m, _)| *m >= start);
        return Ok(WeightPolynomial {
            raw,
            normalized,
            stable_from: start,
            samples,
            hilbert,
        });
    }
    Err(WeightError::NoStabilization {
        cap: DEFAULT_WEIGHT_CAP,
    })
}
