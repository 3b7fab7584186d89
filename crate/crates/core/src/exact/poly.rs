use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactError, Rat};

/// Polynomial in `m` with rational coefficients, `coeffs[k]` multiplying `m^k`.
/// The highest stored coefficient is nonzero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::rat_int(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `c·m^k`
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `m`.
    pub fn var() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, m: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * m + c)
    }

    pub fn eval_f64(&self, m: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * m + super::rat_to_f64(c))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `p(m + c)` by repeated Horner steps.
    pub fn shift(&self, c: &Rat) -> Self {
        let lin = QPoly::new(vec![c.clone(), Rat::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, a| &(&acc * &lin) + &QPoly::constant(a.clone()))
    }

    /// Multiplies by `m^k`.
    pub fn mul_var_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rat::one() / l)),
            None => Self::zero(),
        }
    }

    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly), ExactError> {
        let dd = divisor.degree().ok_or(ExactError::ZeroDenominator)?;
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = super::is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "m")?,
                (1, false) => write!(f, "{mag}*m")?,
                (_, true) => write!(f, "m^{k}")?,
                (_, false) => write!(f, "{mag}*m^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $f(self, rhs: QPoly) -> QPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn poly_eval(p: &QPoly, m: &Rat) -> Rat {
    p.eval(m)
}

/// Δᵏp with Δp(m) = p(m+1) − p(m).
pub fn forward_difference(p: &QPoly, k: usize) -> QPoly {
    let one = Rat::one();
    let mut cur = p.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = &cur.shift(&one) - &cur;
    }
    cur
}

/// P_{k,l}(m) = Δᵏ(mˡ).
pub fn p_poly(k: usize, l: usize) -> QPoly {
    forward_difference(&QPoly::monomial(Rat::one(), l), k)
}

/// Interpolant of degree ≤ `degree_bound` through the first `degree_bound + 1`
/// samples; every later sample must lie on it.
pub fn interpolate(samples: &[(Rat, Rat)], degree_bound: usize) -> Result<QPoly, ExactError> {
    let needed = degree_bound + 1;
    if samples.len() < needed {
        return Err(ExactError::NotEnoughSamples {
            needed,
            got: samples.len(),
        });
    }
    for (i, (a, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(b, _)| a == b) {
            return Err(ExactError::DuplicateAbscissa { m: a.to_string() });
        }
    }
    let (head, tail) = samples.split_at(needed);
    // Newton divided differences
    let xs: Vec<&Rat> = head.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rat> = head.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..needed {
        for i in (level..needed).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut poly = QPoly::zero();
    for i in (0..needed).rev() {
        let lin = QPoly::new(vec![-xs[i].clone(), Rat::one()]);
        poly = &(&poly * &lin) + &QPoly::constant(dd[i].clone());
    }
    for (x, y) in tail {
        if &poly.eval(x) != y {
            return Err(ExactError::InconsistentSamples {
                m: x.to_string(),
                degree: degree_bound,
            });
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::super::{factorial, rat, rat_int};
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(Rat, Rat)> {
        v.iter().map(|&(a, b)| (rat_int(a), rat_int(b))).collect()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly_eval(&QPoly::from_ints(&[1, 0, 1]), &rat_int(2)), rat_int(5));
        assert_eq!(poly_eval(&QPoly::zero(), &rat_int(7)), rat_int(0));
        assert_eq!(poly_eval(&QPoly::from_ints(&[1, 3]), &rat_int(2)), rat_int(7));
    }

    #[test]
    fn normalization_strips_zeros() {
        let p = QPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(QPoly::from_ints(&[0, 0]).is_zero());
        assert_eq!(QPoly::zero().degree(), None);
    }

    #[test]
    fn differences() {
        assert_eq!(
            forward_difference(&QPoly::from_ints(&[0, 0, 1]), 1),
            QPoly::from_ints(&[1, 2])
        );
        assert_eq!(
            forward_difference(&QPoly::from_ints(&[0, 0, 0, 1]), 3),
            QPoly::from_ints(&[6])
        );
        assert!(forward_difference(&QPoly::from_ints(&[0, 1]), 2).is_zero());
    }

    #[test]
    fn p_table_examples() {
        assert_eq!(p_poly(3, 3), QPoly::from_ints(&[6]));
        assert!(p_poly(2, 1).is_zero());
        assert_eq!(p_poly(1, 3), QPoly::from_ints(&[1, 3, 3]));
        for k in 0..=10 {
            assert_eq!(p_poly(k, k), QPoly::constant(Rat::from_integer(factorial(k))));
        }
    }

    #[test]
    fn interpolation_examples() {
        assert_eq!(
            interpolate(&pts(&[(1, 2), (2, 3), (3, 4)]), 1).unwrap(),
            QPoly::from_ints(&[1, 1])
        );
        assert_eq!(
            interpolate(&pts(&[(1, 1), (2, 4), (3, 9), (4, 16)]), 2).unwrap(),
            QPoly::from_ints(&[0, 0, 1])
        );
        assert!(matches!(
            interpolate(&pts(&[(1, 1), (2, 4), (3, 9), (4, 17)]), 2),
            Err(ExactError::InconsistentSamples { .. })
        ));
        assert!(matches!(
            interpolate(&pts(&[(1, 1)]), 2),
            Err(ExactError::NotEnoughSamples { .. })
        ));
        assert!(matches!(
            interpolate(&pts(&[(1, 1), (1, 2)]), 1),
            Err(ExactError::DuplicateAbscissa { .. })
        ));
    }

    #[test]
    fn division_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]); // m² − 1
        let b = QPoly::from_ints(&[1, 1]); // m + 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = QPoly::gcd(&a, &QPoly::from_ints(&[2, 2]));
        assert_eq!(g, QPoly::from_ints(&[1, 1]));
        assert!(a.div_rem(&QPoly::zero()).is_err());
    }

    #[test]
    fn shift_and_display() {
        let p = QPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.shift(&rat_int(1)), QPoly::from_ints(&[1, 2, 1]));
        let q = QPoly::new(vec![rat(-1, 2), rat_int(0), rat_int(-3)]);
        assert_eq!(q.to_string(), "-3*m^2 - 1/2");
        assert_eq!(QPoly::from_ints(&[1, 1]).to_string(), "m + 1");
        assert_eq!(QPoly::zero().to_string(), "0");
    }
}
