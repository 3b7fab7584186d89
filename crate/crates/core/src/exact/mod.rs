//! Exact rational arithmetic: univariate polynomials in `m`, rational
//! functions, truncated series in `1/m`, and sparse row reduction.

mod linalg;
mod poly;
mod ratfun;
mod series;

pub use linalg::{SparseEchelon, SparseVec};
pub use poly::{forward_difference, interpolate, p_poly, poly_eval, QPoly};
pub use ratfun::QRatFun;
pub use series::{series_of_ratio, InvSeries};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("need at least {needed} samples, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },
    #[error("duplicate abscissa m = {m}")]
    DuplicateAbscissa { m: String },
    #[error("sample at m = {m} does not lie on the degree-{degree} interpolant")]
    InconsistentSamples { m: String, degree: usize },
    #[error("numerator degree {numer} exceeds denominator degree {denom}")]
    DegreeMismatch { numer: usize, denom: usize },
    #[error("division by the zero polynomial")]
    ZeroDenominator,
    #[error("index {j} exceeds the number of values {len}")]
    IndexTooLarge { j: usize, len: usize },
    #[error("pole at m = {m}")]
    Pole { m: String },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-2/5"`, `"0.125"` or `"-1.5e-3"` exactly.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| err())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rat::from_integer(digits.parse::<BigInt>().map_err(|_| err())?);
    let scale = exp - frac_part.len() as i32;
    let ten = Rat::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // very large numerator/denominator: scale down through the bit lengths
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let nf = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let df = (d >> shift).to_f64().unwrap_or(f64::NAN);
        nf / df
    })
}

pub fn factorial(k: usize) -> Int {
    (1..=k).fold(Int::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// σ_j of `values`; σ_0 = 1.
pub fn elementary_symmetric(j: usize, values: &[Rat]) -> Result<Rat, ExactError> {
    if j > values.len() {
        return Err(ExactError::IndexTooLarge { j, len: values.len() });
    }
    // e[i] holds σ_i of the prefix processed so far
    let mut e = vec![Rat::zero(); j + 1];
    e[0] = Rat::one();
    for v in values {
        for i in (1..=j).rev() {
            let add = &e[i - 1] * v;
            e[i] += add;
        }
    }
    Ok(e.swap_remove(j))
}

pub(crate) fn sign_pow(k: usize) -> Rat {
    if k % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub(crate) fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::{parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{parse_rat, Rat};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|r| r.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod matrix {
        use super::super::Rat;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(
                m.iter()
                    .map(|row| row.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
            )
        }
    }
}
