//! Rational functions in the even generators, kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::poly::{fmt_rat, Poly, Rat};

/// `num / den` with `gcd(num, den) = 1` and a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoeffFn {
    num: Poly,
    den: Poly,
}

impl Default for CoeffFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl CoeffFn {
    pub fn zero() -> Self {
        CoeffFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        CoeffFn { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn poly(p: Poly) -> Self {
        CoeffFn { num: p, den: Poly::one() }
    }

    /// `None` when `den` is the zero polynomial.
    pub fn ratio(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return CoeffFn { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            CoeffFn { num, den }
        } else {
            let inv = lc.recip();
            CoeffFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
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

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CoeffFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn deriv(&self, var: usize) -> Self {
        if self.den.is_one() {
            return Self::poly(self.num.deriv(var));
        }
        let dn = self.num.deriv(var);
        let dd = self.den.deriv(var);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.num.contains_var(var) || self.den.contains_var(var)
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.den.is_one() {
            return self.num.fmt_with(names);
        }
        format!("({})/({})", self.num.fmt_with(names), self.den.fmt_with(names))
    }
}

impl From<Rat> for CoeffFn {
    fn from(c: Rat) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_constant() {
            Some(c) => write!(f, "{}", fmt_rat(&c)),
            None => write!(f, "{}", self.fmt_with(&|i| format!("v{i}"))),
        }
    }
}

impl Add for &CoeffFn {
    type Output = CoeffFn;
    fn add(self, rhs: &CoeffFn) -> CoeffFn {
        if self.den.is_one() && rhs.den.is_one() {
            return CoeffFn::poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return CoeffFn::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        CoeffFn::reduce(num, &self.den * &rhs.den)
    }
}

impl Sub for &CoeffFn {
    type Output = CoeffFn;
    fn sub(self, rhs: &CoeffFn) -> CoeffFn {
        self + &(-rhs.clone())
    }
}

impl Mul for &CoeffFn {
    type Output = CoeffFn;
    fn mul(self, rhs: &CoeffFn) -> CoeffFn {
        if self.den.is_one() && rhs.den.is_one() {
            return CoeffFn::poly(&self.num * &rhs.num);
        }
        CoeffFn::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for CoeffFn {
    type Output = CoeffFn;
    fn neg(self) -> CoeffFn {
        CoeffFn { num: -self.num, den: self.den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    #[test]
    fn reduces_to_lowest_terms() {
        let x = Poly::var(0);
        let one = Poly::one();
        let num = &(&x * &x) - &one;
        let den = (&x - &one).scale(&rat_int(2));
        let f = CoeffFn::ratio(num, den).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.numer(), &(&x + &one).scale(&crate::poly::rat(1, 2)));
    }

    #[test]
    fn quotient_rule() {
        let x = Poly::var(0);
        let f = CoeffFn::ratio(Poly::one(), &x + &Poly::one()).unwrap();
        let d = f.deriv(0);
        let expected = CoeffFn::ratio(Poly::constant(rat_int(-1)), (&x + &Poly::one()).pow(2)).unwrap();
        assert_eq!(d, expected);
        assert!(CoeffFn::ratio(Poly::one(), Poly::zero()).is_none());
    }

    #[test]
    fn sum_over_common_denominator() {
        let x = Poly::var(0);
        let a = CoeffFn::ratio(Poly::one(), x.clone()).unwrap();
        let b = CoeffFn::ratio(Poly::constant(rat_int(-1)), x.clone()).unwrap();
        assert!((&a + &b).is_zero());
    }
}
