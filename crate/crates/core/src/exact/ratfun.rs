use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactError, QPoly, Rat};

/// Reduced quotient of polynomials in `m` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRatFun {
    numer: QPoly,
    denom: QPoly,
}

impl QRatFun {
    pub fn new(numer: QPoly, denom: QPoly) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if numer.is_zero() {
            return Ok(Self::zero());
        }
        let g = QPoly::gcd(&numer, &denom);
        let (mut n, _) = numer.div_rem(&g)?;
        let (mut d, _) = denom.div_rem(&g)?;
        let lead = d.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = Rat::one() / lead;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(QRatFun { numer: n, denom: d })
    }

    pub fn from_poly(p: QPoly) -> Self {
        QRatFun {
            numer: p,
            denom: QPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }

    pub fn numer(&self) -> &QPoly {
        &self.numer
    }

    pub fn denom(&self) -> &QPoly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    /// The constant value, if this function does not depend on `m`.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.numer.is_constant() && self.denom.is_constant() {
            Some(self.numer.coeff(0) / self.denom.coeff(0))
        } else {
            None
        }
    }

    pub fn eval(&self, m: &Rat) -> Result<Rat, ExactError> {
        let d = self.denom.eval(m);
        if d.is_zero() {
            return Err(ExactError::Pole { m: m.to_string() });
        }
        Ok(self.numer.eval(m) / d)
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        QRatFun::new(self.denom.clone(), self.numer.clone())
    }
}

impl fmt::Display for QRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_constant() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({})/({})", self.numer, self.denom)
        }
    }
}

impl Add for &QRatFun {
    type Output = QRatFun;
    fn add(self, rhs: &QRatFun) -> QRatFun {
        if self.denom == rhs.denom {
            return QRatFun::new(&self.numer + &rhs.numer, self.denom.clone()).unwrap();
        }
        QRatFun::new(
            &(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom),
            &self.denom * &rhs.denom,
        )
        .unwrap()
    }
}

impl Sub for &QRatFun {
    type Output = QRatFun;
    fn sub(self, rhs: &QRatFun) -> QRatFun {
        self + &(-rhs)
    }
}

impl Mul for &QRatFun {
    type Output = QRatFun;
    fn mul(self, rhs: &QRatFun) -> QRatFun {
        QRatFun::new(&self.numer * &rhs.numer, &self.denom * &rhs.denom).unwrap()
    }
}

impl Div for &QRatFun {
    type Output = Result<QRatFun, ExactError>;
    fn div(self, rhs: &QRatFun) -> Result<QRatFun, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        QRatFun::new(&self.numer * &rhs.denom, &self.denom * &rhs.numer)
    }
}

impl Neg for &QRatFun {
    type Output = QRatFun;
    fn neg(self) -> QRatFun {
        QRatFun {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl Mul<&Rat> for &QRatFun {
    type Output = QRatFun;
    fn mul(self, c: &Rat) -> QRatFun {
        if c.is_zero() {
            return QRatFun::zero();
        }
        QRatFun {
            numer: self.numer.scale(c),
            denom: self.denom.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat_int;
    use super::*;

    #[test]
    fn reduces_common_factor() {
        // (m² − 1)/(2m + 2) = (m − 1)/2
        let f = QRatFun::new(QPoly::from_ints(&[-1, 0, 1]), QPoly::from_ints(&[2, 2])).unwrap();
        assert_eq!(f.denom(), &QPoly::one());
        assert_eq!(f.eval(&rat_int(3)).unwrap(), rat_int(1));
    }

    #[test]
    fn pole_reported() {
        let f = QRatFun::new(QPoly::one(), QPoly::from_ints(&[-2, 1])).unwrap();
        assert!(matches!(f.eval(&rat_int(2)), Err(ExactError::Pole { .. })));
        assert!(QRatFun::new(QPoly::one(), QPoly::zero()).is_err());
    }

    #[test]
    fn field_operations() {
        let a = QRatFun::new(QPoly::one(), QPoly::from_ints(&[0, 1])).unwrap();
        let b = QRatFun::new(QPoly::one(), QPoly::from_ints(&[1, 1])).unwrap();
        // 1/m − 1/(m+1) = 1/(m(m+1))
        let d = &a - &b;
        assert_eq!(d.denom(), &QPoly::from_ints(&[0, 1, 1]));
        let back = (&(&d * &a.recip().unwrap()) / &b).unwrap();
        assert_eq!(back.as_constant(), Some(Rat::one()));
        assert_eq!(d.to_string(), "(1)/(m^2 + m)");
    }
}
