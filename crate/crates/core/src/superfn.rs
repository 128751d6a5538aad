//! Grassmann polynomials with rational-function coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed};

use crate::coeff::CoeffFn;
use crate::error::{Error, Result};
use crate::poly::{fmt_rat, Monomial, Poly, Rat};
use crate::table::{Gen, GeneratorTable, Parity};

/// Product of distinct odd generators in strictly increasing index order,
/// stored as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct OddMonomial(u32);

impl OddMonomial {
    pub const ONE: OddMonomial = OddMonomial(0);

    pub fn single(i: usize) -> Self {
        OddMonomial(1 << i)
    }

    pub fn from_mask(mask: u32) -> Self {
        OddMonomial(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn parity(self) -> Parity {
        Parity::from_bits(self.0.count_ones())
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    /// Sorts an arbitrary factor list. Returns the permutation sign, or `None`
    /// when a generator repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(i64, OddMonomial)> {
        let mut acc = OddMonomial::ONE;
        let mut sign = 1;
        for &i in indices {
            let (s, m) = acc.wedge(OddMonomial::single(i))?;
            sign *= s;
            acc = m;
        }
        Some((sign, acc))
    }

    /// `self * other` in canonical order with its sign, `None` if they share a
    /// generator.
    pub fn wedge(self, other: OddMonomial) -> Option<(i64, OddMonomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        Some((if swaps.is_multiple_of(2) { 1 } else { -1 }, OddMonomial(self.0 | other.0)))
    }

    /// Number of factors strictly left of generator `i`.
    pub fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << i) - 1)).count_ones()
    }

    /// Number of factors strictly right of generator `i`.
    pub fn count_above(self, i: usize) -> u32 {
        (self.0 >> (i + 1)).count_ones()
    }

    pub fn without(self, i: usize) -> OddMonomial {
        OddMonomial(self.0 & !(1 << i))
    }
}

impl Ord for OddMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for OddMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One term of an unnormalized product: coefficient times factors in the
/// order written.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub coeff: CoeffFn,
    pub factors: Vec<Gen>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SuperFunction {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<OddMonomial, CoeffFn>,
}

impl SuperFunction {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        SuperFunction { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::constant(table, Rat::one())
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: Rat) -> Self {
        Self::coeff(table, CoeffFn::constant(c))
    }

    pub fn coeff(table: &Arc<GeneratorTable>, c: CoeffFn) -> Self {
        Self::term(table, OddMonomial::ONE, c)
    }

    pub fn term(table: &Arc<GeneratorTable>, m: OddMonomial, c: CoeffFn) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperFunction { table: table.clone(), terms }
    }

    pub fn gen(table: &Arc<GeneratorTable>, g: Gen) -> Self {
        match g {
            Gen::Even(i) => Self::coeff(table, CoeffFn::poly(Poly::var(i))),
            Gen::Odd(i) => Self::term(table, OddMonomial::single(i), CoeffFn::one()),
        }
    }

    /// Look a generator up by name.
    pub fn named(table: &Arc<GeneratorTable>, name: &str) -> Result<Self> {
        let g = table.lookup(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Self::gen(table, g))
    }

    /// Canonical form of a sum of raw products: odd factors are sorted with
    /// the permutation sign, repeated odd factors annihilate the term.
    pub fn normalize(table: &Arc<GeneratorTable>, raw: &[RawTerm]) -> Result<Self> {
        let mut out = Self::zero(table);
        for t in raw {
            let mut odd = Vec::new();
            let mut mono = Monomial::one();
            for &g in &t.factors {
                match g {
                    Gen::Even(i) if i < table.n_even() => mono = mono.mul(&Monomial::var(i)),
                    Gen::Odd(i) if i < table.n_odd() => odd.push(i),
                    _ => return Err(Error::UnknownGenerator(format!("{g:?}"))),
                }
            }
            let Some((sign, m)) = OddMonomial::from_indices(&odd) else {
                continue;
            };
            let c = &t.coeff * &CoeffFn::poly(Poly::term(mono, Rat::from_integer(sign.into())));
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Normalize factors given by name.
    pub fn from_named_terms(table: &Arc<GeneratorTable>, raw: &[(Rat, Vec<&str>)]) -> Result<Self> {
        let raw: Vec<RawTerm> = raw
            .iter()
            .map(|(c, names)| {
                let factors = names
                    .iter()
                    .map(|n| table.lookup(n).ok_or_else(|| Error::UnknownGenerator(n.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(RawTerm { coeff: CoeffFn::constant(c.clone()), factors })
            })
            .collect::<Result<_>>()?;
        Self::normalize(table, &raw)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OddMonomial, &CoeffFn)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: OddMonomial) -> CoeffFn {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: OddMonomial, c: CoeffFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Parity if homogeneous; `None` for zero and for mixed values.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Homogeneous (the zero function counts as homogeneous of either parity).
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.parity().is_some()
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity() == p)
    }

    pub fn part(&self, p: Parity) -> SuperFunction {
        SuperFunction {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity() == p)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components, even first.
    pub fn split_parity(&self) -> [(Parity, SuperFunction); 2] {
        [(Parity::Even, self.part(Parity::Even)), (Parity::Odd, self.part(Parity::Odd))]
    }

    /// Coefficient of the empty odd monomial.
    pub fn body(&self) -> CoeffFn {
        self.coefficient(OddMonomial::ONE)
    }

    pub fn scale(&self, c: &Rat) -> SuperFunction {
        self.mul_coeff(&CoeffFn::constant(c.clone()))
    }

    pub fn mul_coeff(&self, c: &CoeffFn) -> SuperFunction {
        let mut out = Self::zero(&self.table);
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn try_mul(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((s, m)) = ma.wedge(*mb) {
                    let c = ca * cb;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    fn check_table(&self, other: &SuperFunction) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn pow(&self, e: u32) -> SuperFunction {
        let mut acc = Self::one(&self.table);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Left derivative `∂/∂g` acting from the left.
    pub fn left_deriv(&self, g: Gen) -> SuperFunction {
        match g {
            Gen::Even(i) => self.deriv_even(i),
            Gen::Odd(j) => {
                let mut out = Self::zero(&self.table);
                for (m, c) in &self.terms {
                    if m.contains(j) {
                        let c = if m.count_below(j) % 2 == 0 { c.clone() } else { -c.clone() };
                        out.add_term(m.without(j), c);
                    }
                }
                out
            }
        }
    }

    /// Right derivative `f ∂←/∂g`.
    pub fn right_deriv(&self, g: Gen) -> SuperFunction {
        match g {
            Gen::Even(i) => self.deriv_even(i),
            Gen::Odd(j) => {
                let mut out = Self::zero(&self.table);
                for (m, c) in &self.terms {
                    if m.contains(j) {
                        let c = if m.count_above(j) % 2 == 0 { c.clone() } else { -c.clone() };
                        out.add_term(m.without(j), c);
                    }
                }
                out
            }
        }
    }

    pub fn deriv_even(&self, i: usize) -> SuperFunction {
        let mut out = Self::zero(&self.table);
        for (m, c) in &self.terms {
            out.add_term(*m, c.deriv(i));
        }
        out
    }

    /// Checked lookup-by-name variant of [`left_deriv`](Self::left_deriv).
    pub fn left_deriv_named(&self, name: &str) -> Result<SuperFunction> {
        let g = self.table.lookup(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.left_deriv(g))
    }

    pub fn contains_gen(&self, g: Gen) -> bool {
        match g {
            Gen::Even(i) => self.terms.values().any(|c| c.contains_var(i)),
            Gen::Odd(j) => self.terms.keys().any(|m| m.contains(j)),
        }
    }

    /// Multiplicative inverse; requires an invertible body.
    pub fn inverse(&self) -> Result<SuperFunction> {
        let b = self.body();
        let binv = b.recip().ok_or_else(|| Error::NotInvertible("body vanishes".into()))?;
        let one = Self::one(&self.table);
        let nil = &self.mul_coeff(&binv) - &one;
        if nil.is_zero() {
            return Ok(Self::coeff(&self.table, binv));
        }
        let minus_nil = -nil;
        let mut acc = one.clone();
        let mut power = one;
        loop {
            power = &power * &minus_nil;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.mul_coeff(&binv))
    }

    /// Change the table to an extension of the current one.
    pub fn embed(&self, into: &Arc<GeneratorTable>) -> Result<SuperFunction> {
        if !self.table.embeds_into(into) {
            return Err(Error::TableMismatch);
        }
        Ok(SuperFunction { table: into.clone(), terms: self.terms.clone() })
    }

    /// Reinterpret on a table with the same generator layout.
    pub fn with_table(&self, table: &Arc<GeneratorTable>) -> Result<SuperFunction> {
        if table.n_even() != self.table.n_even() || table.n_odd() != self.table.n_odd() {
            return Err(Error::TableMismatch);
        }
        Ok(SuperFunction { table: table.clone(), terms: self.terms.clone() })
    }

    /// Inverse of [`embed`](Self::embed); fails if a generator outside `onto`
    /// occurs.
    pub fn project(&self, onto: &Arc<GeneratorTable>) -> Result<SuperFunction> {
        if !onto.embeds_into(&self.table) {
            return Err(Error::TableMismatch);
        }
        let odd_ok = self.terms.keys().all(|m| m.indices().all(|i| i < onto.n_odd()));
        let even_ok = (onto.n_even()..self.table.n_even()).all(|i| !self.contains_gen(Gen::Even(i)));
        if !(odd_ok && even_ok) {
            return Err(Error::TableMismatch);
        }
        Ok(SuperFunction { table: onto.clone(), terms: self.terms.clone() })
    }

    pub fn substitute(&self, s: &Substitution) -> Result<SuperFunction> {
        if !(Arc::ptr_eq(&s.source, &self.table) || *s.source == *self.table) {
            return Err(Error::TableMismatch);
        }
        let mut powers: HashMap<(usize, u32), SuperFunction> = HashMap::new();
        let mut out = Self::zero(&s.target);
        for (m, c) in &self.terms {
            let mut value = s.eval_poly(c.numer(), &mut powers);
            if !c.is_polynomial() {
                let den = s.eval_poly(c.denom(), &mut powers);
                value = &value * &den.inverse()?;
            }
            for j in m.indices() {
                value = &value * &s.odd[j];
            }
            out = &out + &value;
        }
        Ok(out)
    }

    pub fn fmt_term(&self, m: OddMonomial, c: &CoeffFn) -> Vec<String> {
        let t = &self.table;
        let odd: Vec<&str> = m.indices().map(|i| t.odd_name(i)).collect();
        let odd = odd.join("*");
        let names = |i: usize| t.even_name(i).to_string();
        let mut out = Vec::new();
        if !c.is_polynomial() {
            let base = c.fmt_with(&names);
            out.push(if odd.is_empty() { base } else { format!("{base}*{odd}") });
            return out;
        }
        for (mono, r) in c.numer().terms().collect::<Vec<_>>().into_iter().rev() {
            let single = Poly::term(mono.clone(), r.abs());
            let mut s = String::new();
            if r.is_negative() {
                s.push('-');
            }
            let body = if mono.is_one() {
                if odd.is_empty() || !r.abs().is_one() {
                    fmt_rat(&r.abs())
                } else {
                    String::new()
                }
            } else {
                single.fmt_with(&names)
            };
            s.push_str(&body);
            if !odd.is_empty() {
                if !body.is_empty() {
                    s.push('*');
                }
                s.push_str(&odd);
            }
            out.push(s);
        }
        out
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            for t in self.fmt_term(*m, c) {
                if first {
                    f.write_str(&t)?;
                    first = false;
                } else if let Some(rest) = t.strip_prefix('-') {
                    write!(f, " - {rest}")?;
                } else {
                    write!(f, " + {t}")?;
                }
            }
        }
        Ok(())
    }
}

/// Simultaneous replacement of every generator of `source` by a value on
/// `target`.
#[derive(Clone, Debug)]
pub struct Substitution {
    source: Arc<GeneratorTable>,
    target: Arc<GeneratorTable>,
    even: Vec<SuperFunction>,
    odd: Vec<SuperFunction>,
}

impl Substitution {
    /// Every generator maps to itself.
    pub fn identity(table: &Arc<GeneratorTable>) -> Self {
        Substitution {
            source: table.clone(),
            target: table.clone(),
            even: (0..table.n_even()).map(|i| SuperFunction::gen(table, Gen::Even(i))).collect(),
            odd: (0..table.n_odd()).map(|i| SuperFunction::gen(table, Gen::Odd(i))).collect(),
        }
    }

    /// Full images of the even and odd generators of `source`.
    pub fn new(
        source: &Arc<GeneratorTable>,
        target: &Arc<GeneratorTable>,
        even: Vec<SuperFunction>,
        odd: Vec<SuperFunction>,
    ) -> Result<Self> {
        if even.len() != source.n_even() || odd.len() != source.n_odd() {
            return Err(Error::Dimension("substitution arity".into()));
        }
        let mut s = Substitution { source: source.clone(), target: target.clone(), even: Vec::new(), odd: Vec::new() };
        for (i, v) in even.into_iter().enumerate() {
            s.check(Gen::Even(i), &v)?;
            s.even.push(v);
        }
        for (i, v) in odd.into_iter().enumerate() {
            s.check(Gen::Odd(i), &v)?;
            s.odd.push(v);
        }
        Ok(s)
    }

    /// Replace one generator.
    pub fn set(mut self, g: Gen, value: SuperFunction) -> Result<Self> {
        self.check(g, &value)?;
        match g {
            Gen::Even(i) => self.even[i] = value,
            Gen::Odd(i) => self.odd[i] = value,
        }
        Ok(self)
    }

    pub fn image(&self, g: Gen) -> &SuperFunction {
        match g {
            Gen::Even(i) => &self.even[i],
            Gen::Odd(i) => &self.odd[i],
        }
    }

    pub fn target(&self) -> &Arc<GeneratorTable> {
        &self.target
    }

    fn check(&self, g: Gen, v: &SuperFunction) -> Result<()> {
        if !(Arc::ptr_eq(v.table(), &self.target) || **v.table() == *self.target) {
            return Err(Error::TableMismatch);
        }
        if !v.has_parity(g.parity()) {
            return Err(Error::ParityMismatch(format!(
                "{} is {} but its image `{}` is not",
                self.source.name(g),
                g.parity(),
                v
            )));
        }
        Ok(())
    }

    fn eval_poly(&self, p: &Poly, powers: &mut HashMap<(usize, u32), SuperFunction>) -> SuperFunction {
        let mut out = SuperFunction::zero(&self.target);
        for (mono, c) in p.terms() {
            let mut v = SuperFunction::constant(&self.target, c.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((i, e)).or_insert_with(|| self.even[i].pow(e));
                v = &v * pw;
            }
            out = &out + &v;
        }
        out
    }
}

impl Add for &SuperFunction {
    type Output = SuperFunction;
    fn add(self, rhs: &SuperFunction) -> SuperFunction {
        self.try_add(rhs).expect("operands share a generator table")
    }
}

impl Sub for &SuperFunction {
    type Output = SuperFunction;
    fn sub(self, rhs: &SuperFunction) -> SuperFunction {
        self + &(-rhs.clone())
    }
}

impl Mul for &SuperFunction {
    type Output = SuperFunction;
    fn mul(self, rhs: &SuperFunction) -> SuperFunction {
        self.try_mul(rhs).expect("operands share a generator table")
    }
}

impl Neg for SuperFunction {
    type Output = SuperFunction;
    fn neg(mut self) -> SuperFunction {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Add for SuperFunction {
    type Output = SuperFunction;
    fn add(self, rhs: SuperFunction) -> SuperFunction {
        &self + &rhs
    }
}
