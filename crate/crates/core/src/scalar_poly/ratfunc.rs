use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Rational, ScalarError, UniPoly};
use crate::linalg;

/// Element of the field Q(e) of rational functions in one parameter.
///
/// Always reduced: numerator and denominator are coprime, the denominator is
/// monic, and zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

/// Value of a rational function as the parameter tends to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    Divergent,
}

impl RationalFunction {
    /// Reduces `num / den`. Panics if `den` is zero.
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading_coeff().unwrap().recip();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self::new(p, UniPoly::constant(Rational::one()))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// The parameter `e` itself.
    pub fn epsilon() -> Self {
        Self::from_poly(UniPoly::monomial(Rational::one(), 1))
    }

    /// `e^k` for any integer `k`.
    pub fn epsilon_pow(k: i64) -> Self {
        let m = UniPoly::monomial(Rational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            Self::new(UniPoly::constant(Rational::one()), m)
        }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    /// Order at zero: `ord(num) - ord(den)`; `None` for the zero function.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().expect("denominator is nonzero") as i64;
        Some(vn - vd)
    }

    pub fn limit_at_zero(&self) -> Limit {
        match self.valuation() {
            None => Limit::Finite(Rational::zero()),
            Some(v) if v > 0 => Limit::Finite(Rational::zero()),
            Some(0) => {
                let vn = self.num.valuation().unwrap();
                let vd = self.den.valuation().unwrap();
                Limit::Finite(&self.num.coeffs()[vn] / &self.den.coeffs()[vd])
            }
            Some(_) => Limit::Divergent,
        }
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), Some(0)) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            num: UniPoly::zero(),
            den: UniPoly::constant(Rational::one()),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_is_one = self.den.degree() == Some(0);
        if den_is_one {
            return write!(f, "{}", self.num);
        }
        let num_is_atom = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            && !self.num.leading_coeff().is_some_and(|c| c < &Rational::zero());
        if num_is_atom {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        let den_is_atom = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if den_is_atom {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for RationalFunction {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den,
        }
    }
}

/// Exact inverse of a square matrix over Q(e).
pub fn ratfunc_matrix_inverse(g: &[Vec<RationalFunction>]) -> Result<Vec<Vec<RationalFunction>>, ScalarError> {
    linalg::check_square(g)?;
    linalg::inverse(g).ok_or(ScalarError::SingularFamily)
}
