use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::{LaurentPoly, Rational};
use crate::error::{Error, Result};

/// Element `a(t) + b(t) eta` of the dual-number Laurent ring
/// `Q[t, 1/t][eta] / (eta^2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChartFunction {
    pub reduced: LaurentPoly,
    pub nilpotent: LaurentPoly,
}

impl ChartFunction {
    pub fn new(reduced: LaurentPoly, nilpotent: LaurentPoly) -> Self {
        Self { reduced, nilpotent }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_reduced(LaurentPoly::one())
    }

    pub fn from_reduced(reduced: LaurentPoly) -> Self {
        Self::new(reduced, LaurentPoly::zero())
    }

    /// `c * t^e * eta`
    pub fn eta_monomial(c: Rational, e: i64) -> Self {
        Self::new(LaurentPoly::zero(), LaurentPoly::monomial(c, e))
    }

    pub fn is_zero(&self) -> bool {
        self.reduced.is_zero() && self.nilpotent.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.nilpotent.is_zero() && self.reduced == LaurentPoly::one()
    }

    pub fn is_unit(&self) -> bool {
        self.reduced.as_monomial().is_some()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.reduced.scale(c), self.nilpotent.scale(c))
    }

    /// `(a + b eta)^-1 = a^-1 - a^-2 b eta`, defined when `a` is a nonzero
    /// monomial.
    pub fn inverse(&self) -> Result<Self> {
        let (c, d) = self.reduced.as_monomial().ok_or(Error::NotAUnit)?;
        let a_inv = LaurentPoly::monomial(c.recip(), -d);
        let a_inv2 = &a_inv * &a_inv;
        let nil = -(&a_inv2 * &self.nilpotent);
        Ok(Self::new(a_inv, nil))
    }

    /// `(a + b eta)^n = a^n + n a^(n-1) b eta`; negative `n` needs a unit.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        if n == 0 {
            return Ok(Self::one());
        }
        let n_u = n as u32;
        let a_pow = self.reduced.pow(n_u - 1);
        let nil = (&a_pow * &self.nilpotent).scale(&Rational::from_integer(n.into()));
        Ok(Self::new(&a_pow * &self.reduced, nil))
    }

    /// Evaluates the Laurent polynomial `p` at `self`, i.e. `p(a) + p'(a) b eta`.
    pub fn compose(p: &LaurentPoly, x: &ChartFunction) -> Result<Self> {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out = &out + &x.pow(e)?.scale(c);
        }
        Ok(out)
    }

    /// `d/dt` applied to both coefficients.
    pub fn d_dt(&self) -> Self {
        Self::new(self.reduced.derivative(), self.nilpotent.derivative())
    }

    /// `d/d eta`
    pub fn d_deta(&self) -> Self {
        Self::from_reduced(self.nilpotent.clone())
    }
}

pub fn chart_mul(x: &ChartFunction, y: &ChartFunction) -> ChartFunction {
    x * y
}

pub fn chart_inverse(x: &ChartFunction) -> Result<ChartFunction> {
    x.inverse()
}

impl Mul for &ChartFunction {
    type Output = ChartFunction;
    fn mul(self, rhs: &ChartFunction) -> ChartFunction {
        let reduced = &self.reduced * &rhs.reduced;
        let nilpotent = &(&self.reduced * &rhs.nilpotent) + &(&rhs.reduced * &self.nilpotent);
        ChartFunction { reduced, nilpotent }
    }
}

impl Add for &ChartFunction {
    type Output = ChartFunction;
    fn add(self, rhs: &ChartFunction) -> ChartFunction {
        ChartFunction::new(&self.reduced + &rhs.reduced, &self.nilpotent + &rhs.nilpotent)
    }
}

impl Sub for &ChartFunction {
    type Output = ChartFunction;
    fn sub(self, rhs: &ChartFunction) -> ChartFunction {
        ChartFunction::new(&self.reduced - &rhs.reduced, &self.nilpotent - &rhs.nilpotent)
    }
}

impl Neg for &ChartFunction {
    type Output = ChartFunction;
    fn neg(self) -> ChartFunction {
        ChartFunction::new(-&self.reduced, -&self.nilpotent)
    }
}

impl Mul for ChartFunction {
    type Output = ChartFunction;
    fn mul(self, rhs: ChartFunction) -> ChartFunction {
        &self * &rhs
    }
}

impl Add for ChartFunction {
    type Output = ChartFunction;
    fn add(self, rhs: ChartFunction) -> ChartFunction {
        &self + &rhs
    }
}

impl Sub for ChartFunction {
    type Output = ChartFunction;
    fn sub(self, rhs: ChartFunction) -> ChartFunction {
        &self - &rhs
    }
}

impl From<LaurentPoly> for ChartFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_reduced(p)
    }
}

impl fmt::Display for ChartFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}]*eta", self.reduced, self.nilpotent)
    }
}

impl From<Rational> for ChartFunction {
    fn from(c: Rational) -> Self {
        if c.is_one() {
            Self::one()
        } else {
            Self::from_reduced(LaurentPoly::monomial(c, 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn t_pow(c: Rational, e: i64) -> LaurentPoly {
        LaurentPoly::monomial(c, e)
    }

    #[test]
    fn nilpotent_parts_cancel() {
        let x = ChartFunction::new(LaurentPoly::one(), t_pow(int(1), 1));
        let y = ChartFunction::new(LaurentPoly::one(), t_pow(int(-1), 1));
        assert!(chart_mul(&x, &y).is_one());
    }

    #[test]
    fn t_inverse_times_t_plus_eta() {
        let x = ChartFunction::from_reduced(t_pow(int(1), -1));
        let y = ChartFunction::new(t_pow(int(1), 1), LaurentPoly::one());
        let expect = ChartFunction::new(LaurentPoly::one(), t_pow(int(1), -1));
        assert_eq!(chart_mul(&x, &y), expect);
    }

    #[test]
    fn square_under_eta_squared_zero() {
        let x = ChartFunction::new(t_pow(int(2), 1), LaurentPoly::monomial(int(3), 0));
        let expect = ChartFunction::new(t_pow(int(4), 2), t_pow(int(12), 1));
        assert_eq!(chart_mul(&x, &x), expect);
    }

    #[test]
    fn inverse_of_gluing_unit() {
        // (t + F eta)^-1 = t^-1 - t^-2 F eta
        let f = LaurentPoly::from_terms([(-1, int(1)), (-2, int(1)), (-3, int(1))]);
        let x = ChartFunction::new(LaurentPoly::t(), f.clone());
        let inv = chart_inverse(&x).unwrap();
        assert_eq!(inv.reduced, t_pow(int(1), -1));
        assert_eq!(inv.nilpotent, -(&t_pow(int(1), -2) * &f));
        assert!(chart_mul(&x, &inv).is_one());
    }

    #[test]
    fn inverse_of_one_and_scaled_monomial() {
        assert!(chart_inverse(&ChartFunction::one()).unwrap().is_one());
        // (2t^3 + eta)^-1 = (1/2) t^-3 - (1/4) t^-6 eta
        let x = ChartFunction::new(t_pow(int(2), 3), LaurentPoly::one());
        let inv = chart_inverse(&x).unwrap();
        assert_eq!(inv, ChartFunction::new(t_pow(ratio(1, 2), -3), t_pow(ratio(-1, 4), -6)));
        assert!(chart_mul(&x, &inv).is_one());
    }

    #[test]
    fn non_unit_rejected() {
        let x = ChartFunction::from_reduced(LaurentPoly::from_terms([(0, int(1)), (1, int(1))]));
        assert_eq!(chart_inverse(&x), Err(Error::NotAUnit));
        assert_eq!(chart_inverse(&ChartFunction::zero()), Err(Error::NotAUnit));
    }

    #[test]
    fn compose_matches_taylor_rule() {
        // p(s) = s^2 + 3 at s = t^-1 - t^-2 F eta
        let f = LaurentPoly::monomial(int(5), -1);
        let s = ChartFunction::new(t_pow(int(1), -1), -(&t_pow(int(1), -2) * &f));
        let p = LaurentPoly::from_terms([(2, int(1)), (0, int(3))]);
        let direct = &(&s * &s) + &ChartFunction::from(int(3));
        assert_eq!(ChartFunction::compose(&p, &s).unwrap(), direct);
    }
}
