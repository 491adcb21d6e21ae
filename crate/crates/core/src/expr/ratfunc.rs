//! Rational functions in lowest terms with a monic denominator.

use super::{Atom, Coeff, ExprError, Poly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `num / den` in normal form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return Self { num: num.scale(&c.inv().unwrap()), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides numerator"), den.div_exact(&g).expect("gcd divides denominator"))
        };
        let lc_inv = den.leading().unwrap().1.inv().unwrap();
        Self { num: num.scale(&lc_inv), den: den.scale(&lc_inv) }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn atom(a: Atom) -> Self {
        Self::from_poly(Poly::from_atom(a))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add(&other.num));
            }
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        Self::normalize(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFunc {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, k: &Coeff) -> RatFunc {
        Self { num: self.num.scale(k), den: if k.is_zero() { Poly::one() } else { self.den.clone() } }
    }

    pub fn inv(&self) -> Result<RatFunc, ExprError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ExprError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, exp: i64) -> Result<RatFunc, ExprError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e =
            u32::try_from(exp.unsigned_abs()).map_err(|_| ExprError::Domain(format!("exponent {exp} out of range")))?;
        Ok(Self { num: base.num.pow(e), den: base.den.pow(e) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbol;

    #[test]
    fn cancels_common_factors() {
        let x = Poly::from_atom(Atom::Sym(Symbol::new("x")));
        let one = Poly::one();
        // (x^2 - 1) / (2x - 2) = (x + 1)/2
        let num = x.mul(&x).sub(&one);
        let den = x.scale(&Coeff::from_int(2)).sub(&Poly::constant(Coeff::from_int(2)));
        let r = RatFunc::new(num, den).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numer(), &x.add(&one).scale(&Coeff::from_ratio(1, 2)));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(RatFunc::new(Poly::one(), Poly::zero()), Err(ExprError::DivisionByZero));
    }
}
