//! Subschemes of P^N given degree by degree: monomial ideals, single
//! hypersurfaces and explicit lists of homogeneous kernel generators.

mod io;

pub use io::{parse_scheme_json, parse_term, scheme_to_json};

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{binomial, interpolate, ExactError, QPoly, Rat, SparseEchelon, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("degree {m} is below the hypersurface degree {d}")]
    DegreeTooSmall { m: u32, d: u32 },
    #[error("Hilbert function did not stabilize below degree {cap}")]
    NoStabilization { cap: u32 },
    #[error("invalid scheme data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exponent vector of a monomial in N+1 variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    degree: u32,
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        MultiIndex { degree, exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vars(&self) -> usize {
        self.exponents.len()
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.exponents.len() == other.exponents.len()
            && self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    pub fn times(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn permuted(&self, perm: &[usize]) -> MultiIndex {
        MultiIndex::new(perm.iter().map(|&p| self.exponents[p]).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.exponents.serialize(s)
    }
}

/// All degree-`m` monomials in `vars` variables, graded-lex order
/// (first exponent descending, then the rest recursively).
pub fn enumerate_monomials(vars: usize, m: u32) -> Vec<MultiIndex> {
    fn rec(vars: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if vars == 1 {
            prefix.push(m);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=m).rev() {
            prefix.push(e);
            rec(vars - 1, m - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, m, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

/// dim S^m = C(m+N, N).
pub fn monomial_count(vars: usize, m: u32) -> usize {
    use num_traits::ToPrimitive;
    binomial(m as usize + vars - 1, vars - 1).to_usize().unwrap()
}

/// Homogeneous polynomial with rational coefficients, terms in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    vars: usize,
    degree: u32,
    terms: Vec<(MultiIndex, Rat)>,
}

impl HomogeneousPoly {
    pub fn new(vars: usize, terms: Vec<(MultiIndex, Rat)>) -> Result<Self, IdealError> {
        let mut merged: Vec<(MultiIndex, Rat)> = Vec::new();
        let mut sorted = terms;
        sorted.sort_by(|a, b| b.0.cmp(&a.0));
        for (mi, c) in sorted {
            if mi.vars() != vars {
                return Err(IdealError::Invalid(format!(
                    "term {mi} has {} exponents, expected {vars}",
                    mi.vars()
                )));
            }
            match merged.last_mut() {
                Some((last, acc)) if *last == mi => *acc += c,
                _ => merged.push((mi, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        let degree = match merged.first() {
            Some((mi, _)) => mi.degree(),
            None => return Err(IdealError::Invalid("zero polynomial".into())),
        };
        if merged.iter().any(|(mi, _)| mi.degree() != degree) {
            return Err(IdealError::Invalid("polynomial is not homogeneous".into()));
        }
        Ok(HomogeneousPoly {
            vars,
            degree,
            terms: merged,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(MultiIndex, Rat)] {
        &self.terms
    }

    fn times_monomial(&self, mono: &MultiIndex, index: &HashMap<MultiIndex, usize>) -> SparseVec {
        let mut v: SparseVec = self
            .terms
            .iter()
            .map(|(mi, c)| (index[&mi.times(mono)], c.clone()))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    }

    fn permuted(&self, perm: &[usize]) -> HomogeneousPoly {
        let terms = self
            .terms
            .iter()
            .map(|(mi, c)| (mi.permuted(perm), c.clone()))
            .collect();
        HomogeneousPoly::new(self.vars, terms).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdealData {
    vars: usize,
    generators: Vec<MultiIndex>,
}

impl MonomialIdealData {
    /// Keeps a minimal generating set of the ideal spanned by `generators`.
    pub fn new(vars: usize, generators: Vec<MultiIndex>) -> Result<Self, IdealError> {
        if vars == 0 {
            return Err(IdealError::Invalid("need at least one variable".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.vars() != vars) {
            return Err(IdealError::Invalid(format!(
                "generator {g} has {} exponents, expected {vars}",
                g.vars()
            )));
        }
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        let minimal: Vec<MultiIndex> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        Ok(MonomialIdealData {
            vars,
            generators: minimal,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generators(&self) -> &[MultiIndex] {
        &self.generators
    }

    pub fn contains(&self, mono: &MultiIndex) -> bool {
        self.generators.iter().any(|g| g.divides(mono))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceData {
    poly: HomogeneousPoly,
}

impl HypersurfaceData {
    pub fn new(poly: HomogeneousPoly) -> Result<Self, IdealError> {
        if poly.degree() == 0 {
            return Err(IdealError::Invalid("hypersurface of degree 0".into()));
        }
        Ok(HypersurfaceData { poly })
    }

    pub fn vars(&self) -> usize {
        self.poly.vars()
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn poly(&self) -> &HomogeneousPoly {
        &self.poly
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGeneratorsData {
    vars: usize,
    generators: Vec<HomogeneousPoly>,
}

impl KernelGeneratorsData {
    pub fn new(vars: usize, generators: Vec<HomogeneousPoly>) -> Result<Self, IdealError> {
        if vars == 0 {
            return Err(IdealError::Invalid("need at least one variable".into()));
        }
        if generators.iter().any(|g| g.vars() != vars || g.degree() == 0) {
            return Err(IdealError::Invalid(
                "generators must be nonconstant and live in the ambient ring".into(),
            ));
        }
        Ok(KernelGeneratorsData { vars, generators })
    }

    pub fn generators(&self) -> &[HomogeneousPoly] {
        &self.generators
    }
}

/// A projective subscheme of P^N, through its homogeneous ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeData {
    Monomial(MonomialIdealData),
    Hypersurface(HypersurfaceData),
    KernelGenerators(KernelGeneratorsData),
}

impl SchemeData {
    /// The whole of P^N (zero ideal).
    pub fn projective_space(vars: usize) -> Self {
        SchemeData::Monomial(MonomialIdealData::new(vars, Vec::new()).unwrap())
    }

    pub fn vars(&self) -> usize {
        match self {
            SchemeData::Monomial(d) => d.vars,
            SchemeData::Hypersurface(d) => d.vars(),
            SchemeData::KernelGenerators(d) => d.vars,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SchemeData::Monomial(_) => "monomial",
            SchemeData::Hypersurface(_) => "hypersurface",
            SchemeData::KernelGenerators(_) => "kernel_generators",
        }
    }

    /// The same scheme after renaming variable `perm[i]` to `i`.
    pub fn permuted(&self, perm: &[usize]) -> SchemeData {
        match self {
            SchemeData::Monomial(d) => SchemeData::Monomial(
                MonomialIdealData::new(d.vars, d.generators.iter().map(|g| g.permuted(perm)).collect())
                    .unwrap(),
            ),
            SchemeData::Hypersurface(d) => {
                SchemeData::Hypersurface(HypersurfaceData::new(d.poly.permuted(perm)).unwrap())
            }
            SchemeData::KernelGenerators(d) => SchemeData::KernelGenerators(
                KernelGeneratorsData::new(d.vars, d.generators.iter().map(|g| g.permuted(perm)).collect())
                    .unwrap(),
            ),
        }
    }
}

/// Basis of the degree-`m` part of the ideal, as vectors over the monomials
/// returned by [`enumerate_monomials`].
#[derive(Clone, Debug)]
pub struct GradedKernelBasis {
    pub degree: u32,
    pub monomials: Vec<MultiIndex>,
    pub vectors: Vec<SparseVec>,
}

impl GradedKernelBasis {
    pub fn ambient_dim(&self) -> usize {
        self.monomials.len()
    }
}

fn monomial_index(monos: &[MultiIndex]) -> HashMap<MultiIndex, usize> {
    monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

pub fn kernel_basis(scheme: &SchemeData, m: u32) -> Result<GradedKernelBasis, IdealError> {
    let vars = scheme.vars();
    let monomials = enumerate_monomials(vars, m);
    let vectors = match scheme {
        SchemeData::Monomial(d) => monomials
            .iter()
            .enumerate()
            .filter(|(_, mono)| d.contains(mono))
            .map(|(i, _)| vec![(i, Rat::from_integer(1.into()))])
            .collect(),
        SchemeData::Hypersurface(h) => {
            let d = h.degree();
            if m < d {
                return Err(IdealError::DegreeTooSmall { m, d });
            }
            let index = monomial_index(&monomials);
            enumerate_monomials(vars, m - d)
                .iter()
                .map(|mono| h.poly.times_monomial(mono, &index))
                .collect()
        }
        SchemeData::KernelGenerators(k) => {
            let index = monomial_index(&monomials);
            let mut ech = SparseEchelon::new(monomials.len());
            for g in k.generators.iter().filter(|g| g.degree() <= m) {
                for mono in enumerate_monomials(vars, m - g.degree()) {
                    ech.insert(g.times_monomial(&mono, &index));
                }
            }
            ech.rows().to_vec()
        }
    };
    Ok(GradedKernelBasis {
        degree: m,
        monomials,
        vectors,
    })
}

/// dim S^m − dim I_m.
pub fn hilbert_function(scheme: &SchemeData, m: u32) -> usize {
    let vars = scheme.vars();
    match scheme {
        SchemeData::Monomial(d) => enumerate_monomials(vars, m)
            .iter()
            .filter(|mono| !d.contains(mono))
            .count(),
        // multiplication by f is injective, so f·S^{m−d} has full rank
        SchemeData::Hypersurface(h) => {
            let total = monomial_count(vars, m);
            if m < h.degree() {
                total
            } else {
                total - monomial_count(vars, m - h.degree())
            }
        }
        SchemeData::KernelGenerators(_) => hilbert_function_by_rank(scheme, m),
    }
}

/// dim S^m − rank of the kernel vectors, by exact elimination.
pub fn hilbert_function_by_rank(scheme: &SchemeData, m: u32) -> usize {
    let kb = match kernel_basis(scheme, m) {
        Ok(kb) => kb,
        Err(_) => return monomial_count(scheme.vars(), m),
    };
    let mut ech = SparseEchelon::new(kb.ambient_dim());
    for v in kb.vectors {
        ech.insert(v);
    }
    kb.monomials.len() - ech.rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub poly: QPoly,
    pub stable_from: u32,
}

impl HilbertPolynomial {
    /// Dimension of the scheme (degree of χ); `None` for the empty scheme.
    pub fn dimension(&self) -> Option<usize> {
        self.poly.degree()
    }
}

pub const DEFAULT_DEGREE_CAP: u32 = 40;

pub fn hilbert_polynomial(scheme: &SchemeData) -> Result<HilbertPolynomial, IdealError> {
    hilbert_polynomial_with_cap(scheme, DEFAULT_DEGREE_CAP)
}

/// Smallest `m₀ ≤ cap` such that the interpolant of degree ≤ N through
/// h(m₀), …, h(m₀+N) also reproduces h(m₀+N+1) and h(m₀+N+2).
pub fn hilbert_polynomial_with_cap(scheme: &SchemeData, cap: u32) -> Result<HilbertPolynomial, IdealError> {
    let big_n = scheme.vars() as u32 - 1;
    let mut values: Vec<Rat> = Vec::new();
    let value = |m: u32, values: &mut Vec<Rat>| -> Rat {
        while values.len() <= m as usize {
            let h = hilbert_function(scheme, values.len() as u32);
            values.push(Rat::from_integer(h.into()));
        }
        values[m as usize].clone()
    };
    for m0 in 0..=cap {
        let samples: Vec<(Rat, Rat)> = (m0..=m0 + big_n + 2)
            .map(|m| (Rat::from_integer(m.into()), value(m, &mut values)))
            .collect();
        match interpolate(&samples, big_n as usize) {
            Ok(poly) => return Ok(HilbertPolynomial { poly, stable_from: m0 }),
            Err(ExactError::InconsistentSamples { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(IdealError::NoStabilization { cap })
}
