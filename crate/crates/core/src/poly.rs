//! Sparse multivariate polynomials over the rationals.
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so a polynomial
//! built over `k` variables is also a valid polynomial over any `k' > k`
//! variables. Terms are kept in lexicographic order with variable 0 the most
//! significant; the leading term is the last entry of the map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// Parse-free helper for small rational literals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact square root of a rational, if it exists.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial(v)
    }

    pub fn from_exponents(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut v = long.clone();
        for (a, b) in v.iter_mut().zip(short.iter()) {
            *a += b;
        }
        Monomial(v)
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (a, b) in v.iter_mut().zip(other.0.iter()) {
            if *a < *b {
                return None;
            }
            *a -= b;
        }
        Some(Self::from_exponents(v))
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Self::from_exponents(v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn deriv(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                out.add_term(m.with_exp(var, e - 1), c * rat_int(e as i64));
            }
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Smallest variable index occurring in the polynomial.
    fn min_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.0.iter().position(|&e| e > 0))
            .min()
    }

    /// Coefficients with respect to `var`, keyed by the power of `var`.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            out.entry(e).or_default().add_term(m.with_exp(var, 0), c.clone());
        }
        out
    }

    fn coefficient_of_power(&self, var: usize, e: u32) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(var) == e)
                .map(|(m, c)| (m.with_exp(var, 0), c.clone())),
        )
    }

    /// Substitute a constant for a variable.
    pub fn eval_var(&self, var: usize, value: &Rat) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            let factor = num::pow::pow(value.clone(), e as usize);
            out.add_term(m.with_exp(var, 0), c * factor);
        }
        out
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            rem = &rem - &d.mul_monomial(&m, &c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        let v = match (a.min_var(), b.min_var()) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => return Poly::one(),
        };
        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let c = Poly::gcd(&ca, &cb);
        let mut pa = a.exact_div(&ca).expect("content divides");
        let mut pb = b.exact_div(&cb).expect("content divides");
        if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
            return c.monic();
        }
        if pa.degree_in(v) < pb.degree_in(v) {
            std::mem::swap(&mut pa, &mut pb);
        }
        loop {
            let r = pa.pseudo_rem(&pb, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v) == 0 {
                return c.monic();
            }
            pa = pb;
            pb = r.primitive_part_in(v);
        }
        (&c * &pb.primitive_part_in(v)).monic()
    }

    fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero();
        for coeff in self.coefficients_in(var).values() {
            g = Poly::gcd(&g, coeff);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, var: usize) -> Poly {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides").monic()
    }

    fn pseudo_rem(&self, b: &Poly, var: usize) -> Poly {
        let db = b.degree_in(var);
        let lcb = b.coefficient_of_power(var, db);
        let mut a = self.clone();
        while !a.is_zero() && a.degree_in(var) >= db {
            let da = a.degree_in(var);
            let lca = a.coefficient_of_power(var, da);
            let shift = Poly::term(Monomial::var_pow(var, da - db), Rat::one());
            a = &(&lcb * &a) - &(&(&lca * &shift) * b);
        }
        a
    }

    /// Exact square root, normalized to be positive at the origin (or to have
    /// a positive leading coefficient when it vanishes there).
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading()?;
        if lm.0.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let root_m = Monomial(lm.0.iter().map(|e| e / 2).collect());
        let mut root = Poly::term(root_m.clone(), rat_sqrt(lc)?);
        let two_lead = Poly::term(root_m, rat_sqrt(lc)? * rat_int(2));
        let budget: usize = (0..lm.0.len().max(1))
            .map(|i| self.degree_in(i) as usize / 2 + 1)
            .product::<usize>()
            * (self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0) + 1);
        for _ in 0..=budget {
            let rem = self - &(&root * &root);
            if rem.is_zero() {
                let c = root.constant_term();
                if c.is_negative() {
                    root = -root;
                }
                return Some(root);
            }
            let (rm, rc) = rem.leading()?;
            let (tm, tc) = two_lead.leading()?;
            let m = rm.div(tm)?;
            root.add_term(m, rc / tc);
        }
        None
    }

    /// Human-readable form using the supplied variable names.
    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors = monomial_factors(m, names);
            if factors.is_empty() {
                out.push_str(&fmt_rat(&abs));
            } else if abs.is_one() {
                out.push_str(&factors);
            } else {
                out.push_str(&fmt_rat(&abs));
                out.push('*');
                out.push_str(&factors);
            }
        }
        out
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn monomial_factors(m: &Monomial, names: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names(i)),
            _ => parts.push(format!("{}^{}", names(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|i| format!("v{i}")))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(rat_int(n))
    }

    #[test]
    fn trailing_zeros_are_canonical() {
        assert_eq!(Monomial::from_exponents(vec![1, 0, 0]), Monomial::var(0));
        assert!(Monomial::var(0) < Monomial::from_exponents(vec![1, 1]));
        assert!(Monomial::from_exponents(vec![0, 5]) < Monomial::var(0));
    }

    #[test]
    fn gcd_univariate_and_bivariate() {
        let a = &(&x() + &c(1)) * &(&x() - &c(2));
        let b = &(&x() + &c(1)) * &(&x() + &c(3));
        assert_eq!(Poly::gcd(&a, &b), &x() + &c(1));

        let common = &(&x() * &y()) + &c(1);
        let a = &common * &(&x() + &y());
        let b = &common.scale(&rat_int(3)) * &(&x() - &y());
        assert_eq!(Poly::gcd(&a, &b), common);
        assert_eq!(Poly::gcd(&x(), &y()), Poly::one());
    }

    #[test]
    fn exact_division() {
        let a = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(a.exact_div(&(&x() - &y())), Some(&x() + &y()));
        assert_eq!(a.exact_div(&(&x() + &c(1))), None);
    }

    #[test]
    fn square_roots() {
        let p = &(&x() - &c(1)) * &y();
        let sq = &p * &p;
        let r = sq.sqrt().unwrap();
        assert_eq!(&r * &r, sq);
        assert!(!(&x() + &c(1)).sqrt().is_some());
        assert_eq!(c(4).sqrt(), Some(c(2)));
        let q = &c(1) - &x();
        assert_eq!((&q * &q).sqrt(), Some(q));
    }

    #[test]
    fn derivative_and_pow() {
        let p = (&x() + &y()).pow(3);
        assert_eq!(p.deriv(0), (&x() + &y()).pow(2).scale(&rat_int(3)));
        assert_eq!(p.eval_var(1, &rat_int(0)), x().pow(3));
    }
}
