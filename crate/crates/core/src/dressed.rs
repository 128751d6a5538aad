//! Values of the form `base · e^exponent` with an even exponent.

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::coeff::CoeffFn;
use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::superfn::{OddMonomial, SuperFunction};
use crate::table::{Gen, GeneratorTable, Parity};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DressedFunction {
    base: SuperFunction,
    exponent: SuperFunction,
}

impl DressedFunction {
    pub fn new(base: SuperFunction, exponent: SuperFunction) -> Result<Self> {
        if base.table() != exponent.table() {
            return Err(Error::TableMismatch);
        }
        if !exponent.has_parity(Parity::Even) {
            return Err(Error::OddExponent);
        }
        Ok(DressedFunction { base, exponent })
    }

    /// `f · e^0`.
    pub fn plain(f: SuperFunction) -> Self {
        let exponent = SuperFunction::zero(f.table());
        DressedFunction { base: f, exponent }
    }

    /// `1 · e^S`.
    pub fn exp(s: SuperFunction) -> Result<Self> {
        Self::new(SuperFunction::one(s.table()), s)
    }

    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        Self::plain(SuperFunction::zero(table))
    }

    pub fn base(&self) -> &SuperFunction {
        &self.base
    }

    pub fn exponent(&self) -> &SuperFunction {
        &self.exponent
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        self.base.table()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn parity(&self) -> Option<Parity> {
        self.base.parity()
    }

    pub fn is_plain(&self) -> bool {
        self.exponent.is_zero()
    }

    pub fn with_base(&self, base: SuperFunction) -> Self {
        DressedFunction { base, exponent: self.exponent.clone() }
    }

    /// `∂(f e^S) = (∂f + (∂S) f) e^S`.
    pub fn left_deriv(&self, g: Gen) -> Self {
        let d = &self.base.left_deriv(g) + &(&self.exponent.left_deriv(g) * &self.base);
        self.with_base(d)
    }

    pub fn mul(&self, other: &DressedFunction) -> Result<Self> {
        Ok(DressedFunction {
            base: self.base.try_mul(&other.base)?,
            exponent: self.exponent.try_add(&other.exponent)?,
        })
    }

    /// `f · self`.
    pub fn mul_left(&self, f: &SuperFunction) -> Self {
        self.with_base(f * &self.base)
    }

    /// `self · f`.
    pub fn mul_right(&self, f: &SuperFunction) -> Self {
        self.with_base(&self.base * f)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.with_base(self.base.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.with_base(-self.base.clone())
    }

    /// Sum of two values; exponents must agree once nilpotent parts are
    /// expanded into the base.
    pub fn add(&self, other: &DressedFunction) -> Result<Self> {
        if self.exponent == other.exponent {
            return Ok(self.with_base(self.base.try_add(&other.base)?));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let a = self.expand_nilpotent();
        let b = other.expand_nilpotent();
        if a.exponent != b.exponent {
            return Err(Error::ExponentMismatch);
        }
        Ok(a.with_base(a.base.try_add(&b.base)?))
    }

    pub fn sub(&self, other: &DressedFunction) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Move the nilpotent part `R` of the exponent into the base through
    /// the terminating series `e^R = Σ R^k / k!`.
    pub fn expand_nilpotent(&self) -> Self {
        let table = self.table();
        let body = SuperFunction::coeff(table, self.exponent.body());
        let nil = &self.exponent - &body;
        if nil.is_zero() {
            return self.clone();
        }
        let mut series = SuperFunction::one(table);
        let mut power = SuperFunction::one(table);
        let mut k = Rat::one();
        loop {
            power = (&power * &nil).scale(&k.recip());
            if power.is_zero() {
                break;
            }
            series = &series + &power;
            k += Rat::one();
        }
        DressedFunction { base: &self.base * &series, exponent: body }
    }

    /// The exponent body, as a coefficient.
    pub fn exponent_body(&self) -> CoeffFn {
        self.exponent.coefficient(OddMonomial::ONE)
    }

    pub fn substitute(&self, s: &crate::superfn::Substitution) -> Result<Self> {
        Ok(DressedFunction { base: self.base.substitute(s)?, exponent: self.exponent.substitute(s)? })
    }

    pub fn with_table(&self, table: &Arc<GeneratorTable>) -> Result<Self> {
        Ok(DressedFunction { base: self.base.with_table(table)?, exponent: self.exponent.with_table(table)? })
    }

    /// Equality as functions: compares after expanding nilpotent exponents.
    pub fn same_value(&self, other: &DressedFunction) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self == other {
            return true;
        }
        self.expand_nilpotent() == other.expand_nilpotent()
    }
}

impl From<SuperFunction> for DressedFunction {
    fn from(f: SuperFunction) -> Self {
        Self::plain(f)
    }
}

impl fmt::Display for DressedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_zero() || self.base.is_zero() {
            write!(f, "{}", self.base)
        } else {
            write!(f, "({})*exp({})", self.base, self.exponent)
        }
    }
}

/// Formal sum of dressed values with distinct exponents.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DressedSum {
    terms: Vec<DressedFunction>,
}

impl DressedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, f: DressedFunction) {
        if f.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|t| t.exponent == f.exponent) {
            let sum = self.terms[pos].add(&f).expect("equal exponents");
            if sum.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos] = sum;
            }
        } else {
            self.terms.push(f);
        }
    }

    pub fn terms(&self) -> &[DressedFunction] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for DressedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Zero for DressedSum {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for DressedSum {
    type Output = DressedSum;
    fn add(mut self, rhs: DressedSum) -> DressedSum {
        for t in rhs.terms {
            self.push(t);
        }
        self
    }
}
