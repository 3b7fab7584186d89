//! Brute-force references shared by the integration tests. Each one is the
//! textbook definition, with no attempt at speed.

#![allow(dead_code)]

use gitenergy::exact::{binomial, rat_int, QPoly, Rat, SparseEchelon, SparseVec};
use gitenergy::ideals::{enumerate_monomials, GradedKernelBasis, MultiIndex};
use gitenergy::weights::{monomial_weight, OneParameterSubgroup};

/// Σ_i (−1)^{k−i} C(k,i) (m+i)^l.
pub fn difference_at(k: usize, l: usize, m: &Rat) -> Rat {
    (0..=k).fold(rat_int(0), |acc, i| {
        let term = Rat::from_integer(binomial(k, i)) * num_traits::pow(m + rat_int(i as i64), l);
        if (k - i) % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Degree-m monomials divisible by none of the generators.
pub fn standard_monomials(vars: usize, m: u32, generators: &[MultiIndex]) -> Vec<MultiIndex> {
    enumerate_monomials(vars, m)
        .into_iter()
        .filter(|mono| {
            !generators.iter().any(|g| g.exponents().iter().zip(mono.exponents()).all(|(a, b)| a <= b))
        })
        .collect()
}

/// Coefficients of m^{−l}, l = 0..=n+1, in w(m)/(mχ(m)) by long division
/// from the top degree down.
pub fn laurent_head(w: &QPoly, chi: &QPoly, n: usize) -> Vec<Rat> {
    let top = n + 1;
    let a = |k: usize| if k <= top { w.coeff(top - k) } else { rat_int(0) };
    // mχ(m) has degree n+1 with coefficients χ_{j−1}
    let b = |k: usize| if k <= n { chi.coeff(n - k) } else { rat_int(0) };
    let mut f: Vec<Rat> = Vec::new();
    for l in 0..=top {
        let mut x = a(l);
        for (j, fj) in f.iter().enumerate() {
            x -= fj * b(l - j);
        }
        f.push(x / b(0));
    }
    f
}

/// Smallest weight of χ monomials spanning S^m modulo the kernel, by trying
/// every subset of size χ.
pub fn exhaustive_min_weight(kernel: &GradedKernelBasis, lambda: &OneParameterSubgroup, chi: usize) -> Option<i64> {
    let n = kernel.monomials.len();
    if chi > n {
        return None;
    }
    let weights: Vec<i64> = kernel.monomials.iter().map(|m| monomial_weight(lambda, m).unwrap()).collect();
    let mut base = SparseEchelon::new(n);
    for v in &kernel.vectors {
        base.insert(v.clone());
    }
    let mut best: Option<i64> = None;
    let mut idx: Vec<usize> = (0..chi).collect();
    loop {
        let mut ech = base.clone();
        let independent = idx.iter().all(|&i| {
            let unit: SparseVec = vec![(i, rat_int(1))];
            ech.insert(unit)
        });
        if independent && ech.rank() == n {
            let w: i64 = idx.iter().map(|&i| weights[i]).sum();
            best = Some(best.map_or(w, |b| b.min(w)));
        }
        // next subset in lexicographic order
        let mut k = chi;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if idx[k] < k + n - chi {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..chi {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
