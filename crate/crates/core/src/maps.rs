//! Coordinate maps between charts, super-Jacobians, Berezinians and
//! pushforwards.

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::coeff::CoeffFn;
use crate::densities::{ReferenceDensity, SDensity};
use crate::dressed::DressedFunction;
use crate::error::{Error, Result};
use crate::poly::{fmt_rat, rat_sqrt, Rat};
use crate::superfn::{Substitution, SuperFunction};
use crate::symplectic::SuperVectorField;
use crate::table::{Gen, GeneratorTable, Parity};

/// `Ψ: source → target`, given by the images of the target's pair
/// coordinates as functions on the source. Parameters map to themselves.
#[derive(Clone, Debug)]
pub struct ChartMap {
    source: Arc<GeneratorTable>,
    target: Arc<GeneratorTable>,
    even: Vec<SuperFunction>,
    odd: Vec<SuperFunction>,
    inverse: Option<Box<ChartMap>>,
}

impl ChartMap {
    pub fn new(
        source: &Arc<GeneratorTable>,
        target: &Arc<GeneratorTable>,
        even: Vec<SuperFunction>,
        odd: Vec<SuperFunction>,
    ) -> Result<Self> {
        let n = target.n_pairs();
        if even.len() != n || odd.len() != n {
            return Err(Error::Dimension(format!("map needs {n} even and {n} odd images")));
        }
        if source.n_params() != target.n_params() {
            return Err(Error::Dimension("charts carry different parameters".into()));
        }
        for (i, e) in even.iter().enumerate() {
            check_image(source, target, Gen::Even(i), e)?;
        }
        for (i, o) in odd.iter().enumerate() {
            check_image(source, target, Gen::Odd(i), o)?;
        }
        Ok(ChartMap { source: source.clone(), target: target.clone(), even, odd, inverse: None })
    }

    pub fn identity(table: &Arc<GeneratorTable>) -> Self {
        let n = table.n_pairs();
        let even = (0..n).map(|i| SuperFunction::gen(table, Gen::Even(i))).collect();
        let odd = (0..n).map(|i| SuperFunction::gen(table, Gen::Odd(i))).collect();
        let mut id = ChartMap { source: table.clone(), target: table.clone(), even, odd, inverse: None };
        id.inverse = Some(Box::new(id.clone()));
        id
    }

    /// Attach an inverse after checking both compositions are the identity.
    pub fn with_inverse(mut self, inv: ChartMap) -> Result<Self> {
        if inv.source != self.target || inv.target != self.source {
            return Err(Error::TableMismatch);
        }
        if !self.compose(&inv)?.is_identity() || !inv.compose(&self)?.is_identity() {
            return Err(Error::BadInverse);
        }
        let mut inv = inv;
        inv.inverse = Some(Box::new(ChartMap { inverse: None, ..self.clone() }));
        self.inverse = Some(Box::new(inv));
        Ok(self)
    }

    pub fn source(&self) -> &Arc<GeneratorTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GeneratorTable> {
        &self.target
    }

    /// `Ψ^*` of the target generator `g`.
    pub fn image(&self, g: Gen) -> &SuperFunction {
        match g {
            Gen::Even(i) => &self.even[i],
            Gen::Odd(i) => &self.odd[i],
        }
    }

    pub fn inverse(&self) -> Result<&ChartMap> {
        self.inverse.as_deref().ok_or(Error::MissingInverse)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.even.iter().enumerate().all(|(i, e)| *e == SuperFunction::gen(&self.source, Gen::Even(i)))
            && self.odd.iter().enumerate().all(|(i, o)| *o == SuperFunction::gen(&self.source, Gen::Odd(i)))
    }

    fn substitution(&self) -> Substitution {
        let mut even = self.even.clone();
        for k in 0..self.target.n_params() {
            even.push(SuperFunction::gen(&self.source, Gen::Even(self.source.param(k))));
        }
        Substitution::new(&self.target, &self.source, even, self.odd.clone()).expect("validated images")
    }

    /// `f ∘ Ψ` for `f` on the target.
    pub fn pull(&self, f: &SuperFunction) -> Result<SuperFunction> {
        f.substitute(&self.substitution())
    }

    pub fn pull_dressed(&self, f: &DressedFunction) -> Result<DressedFunction> {
        f.substitute(&self.substitution())
    }

    /// `Ψ_* f = f ∘ Ψ^{-1}` for `f` on the source.
    pub fn push(&self, f: &SuperFunction) -> Result<SuperFunction> {
        self.inverse()?.pull(f)
    }

    pub fn push_dressed(&self, f: &DressedFunction) -> Result<DressedFunction> {
        self.inverse()?.pull_dressed(f)
    }

    /// `self ∘ first`, defined when `first` lands in the source of `self`.
    pub fn compose(&self, first: &ChartMap) -> Result<ChartMap> {
        if first.target != self.source {
            return Err(Error::TableMismatch);
        }
        let even = self.even.iter().map(|e| first.pull(e)).collect::<Result<Vec<_>>>()?;
        let odd = self.odd.iter().map(|o| first.pull(o)).collect::<Result<Vec<_>>>()?;
        let mut out = ChartMap::new(&first.source, &self.target, even, odd)?;
        if let (Some(a), Some(b)) = (first.inverse.as_deref(), self.inverse.as_deref()) {
            let inv_even = a.even.iter().map(|e| b.pull(e)).collect::<Result<Vec<_>>>()?;
            let inv_odd = a.odd.iter().map(|o| b.pull(o)).collect::<Result<Vec<_>>>()?;
            out.inverse = Some(Box::new(ChartMap::new(&self.target, &first.source, inv_even, inv_odd)?));
        }
        Ok(out)
    }

    /// Rows are indexed by source coordinates, columns by target coordinates
    /// (even first in both); entry `(a, b)` is the left derivative
    /// `∂Ψ^b / ∂z^a`.
    pub fn jacobian(&self) -> SuperMatrix {
        let n = self.source.n_pairs();
        let rows: Vec<Gen> = (0..n).map(Gen::Even).chain((0..n).map(Gen::Odd)).collect();
        let cols: Vec<Gen> = (0..self.target.n_pairs()).map(Gen::Even).chain((0..n).map(Gen::Odd)).collect();
        let entries = rows
            .iter()
            .map(|&a| cols.iter().map(|&b| self.image(b).left_deriv(a)).collect())
            .collect();
        SuperMatrix { table: self.source.clone(), n_even: n, n_odd: n, entries }
    }

    pub fn berezinian(&self) -> Result<SuperFunction> {
        self.jacobian().berezinian()
    }

    /// `(Ψ_* X)^{b} = Ψ_*(X(Ψ^b))`.
    pub fn push_vf(&self, x: &SuperVectorField) -> Result<SuperVectorField> {
        let n = self.target.n_pairs();
        let up = (0..n).map(|i| self.push(&x.apply(&self.even[i]))).collect::<Result<Vec<_>>>()?;
        let down = (0..n).map(|i| self.push(&x.apply(&self.odd[i]))).collect::<Result<Vec<_>>>()?;
        SuperVectorField::new(&self.target, up, down)
    }

    /// `Ψ_*(f μ_stand^s) = (Ψ_* f)(Ψ_* Ber)^{-s} μ_stand'^s`.
    pub fn push_density(&self, sigma: &SDensity) -> Result<SDensity> {
        let s = sigma.weight().clone();
        let f = self.push_dressed(sigma.coeff())?;
        if s.is_zero() {
            return Ok(SDensity::new(s, f));
        }
        let ber = self.push(&self.berezinian()?)?;
        let factor = power(&ber, &-s.clone())?;
        Ok(SDensity::new(s, f.mul_right(&factor)))
    }

    /// `Ψ_* μ` for a reference density. The pushed Berezinian must have a
    /// positive rational body so that its logarithm is available.
    pub fn push_reference(&self, mu: &ReferenceDensity) -> Result<ReferenceDensity> {
        let ber = self.push(&self.berezinian()?)?;
        let body = ber.body().as_constant().filter(|c| c.is_positive()).ok_or_else(|| {
            Error::Unsupported("pushforward of a reference density needs a positive constant Berezinian body".into())
        })?;
        let nil = &ber.scale(&body.recip()) - &SuperFunction::one(ber.table());
        let log = &self.push(mu.log())? - &log_one_plus(&nil);
        ReferenceDensity::new(mu.scale() / body, log)
    }
}

impl fmt::Display for ChartMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, e) in self.even.iter().enumerate() {
            parts.push(format!("{} = {}", self.target.even_name(i), e));
        }
        for (i, o) in self.odd.iter().enumerate() {
            parts.push(format!("{} = {}", self.target.odd_name(i), o));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn check_image(source: &Arc<GeneratorTable>, target: &GeneratorTable, g: Gen, e: &SuperFunction) -> Result<()> {
    if e.table() != source {
        return Err(Error::TableMismatch);
    }
    if !e.has_parity(g.parity()) {
        return Err(Error::ParityMismatch(format!("image of {} is `{}`", target.name(g), e)));
    }
    Ok(())
}

/// `log(1 + N)` for nilpotent even `N`.
fn log_one_plus(nil: &SuperFunction) -> SuperFunction {
    let mut out = SuperFunction::zero(nil.table());
    let mut power = SuperFunction::one(nil.table());
    let mut k = 1i64;
    loop {
        power = &power * nil;
        if power.is_zero() {
            return out;
        }
        let c = Rat::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, k.into());
        out = &out + &power.scale(&c);
        k += 1;
    }
}

/// `f^s` for even `f` with invertible body. The body power must be exact:
/// `s` integral, or `s` a half-integer and the body a perfect square.
pub fn power(f: &SuperFunction, s: &Rat) -> Result<SuperFunction> {
    let table = f.table();
    let body = f.body();
    let inv_body = body.recip().ok_or_else(|| Error::NotInvertible("power of a function with zero body".into()))?;
    let nil = &f.mul_coeff(&inv_body) - &SuperFunction::one(table);
    let body_pow = coeff_power(&body, s)?;
    let mut series = SuperFunction::one(table);
    let mut term = SuperFunction::one(table);
    let mut binom = Rat::one();
    let mut k = 0i64;
    loop {
        term = &term * &nil;
        if term.is_zero() {
            break;
        }
        binom = binom * (s - Rat::from_integer(k.into())) / Rat::from_integer((k + 1).into());
        series = &series + &term.scale(&binom);
        k += 1;
    }
    Ok(series.mul_coeff(&body_pow))
}

fn coeff_power(c: &CoeffFn, s: &Rat) -> Result<CoeffFn> {
    let unsupported = || Error::FractionalPower(format!("({}) ^ ({})", c, fmt_rat(s)));
    let base = if s.denom().is_one() {
        c.clone()
    } else if *s.denom() == 2.into() {
        coeff_sqrt(c).ok_or_else(unsupported)?
    } else {
        return Err(unsupported());
    };
    let e: i64 = s.numer().try_into().map_err(|_| unsupported())?;
    let mut acc = CoeffFn::one();
    for _ in 0..e.unsigned_abs() {
        acc = &acc * &base;
    }
    if e < 0 {
        acc = acc.recip().ok_or_else(unsupported)?;
    }
    Ok(acc)
}

fn coeff_sqrt(c: &CoeffFn) -> Option<CoeffFn> {
    if let Some(k) = c.as_constant() {
        return rat_sqrt(&k).map(CoeffFn::constant);
    }
    let num = c.numer().sqrt()?;
    let den = c.denom().sqrt()?;
    CoeffFn::ratio(num, den)
}

/// Square even supermatrix in standard format: entries in the blocks
/// `A` (even rows, even columns) and `D` (odd rows, odd columns) are even,
/// entries in `B` and `C` are odd.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperMatrix {
    table: Arc<GeneratorTable>,
    n_even: usize,
    n_odd: usize,
    entries: Vec<Vec<SuperFunction>>,
}

impl SuperMatrix {
    pub fn new(table: &Arc<GeneratorTable>, n_even: usize, n_odd: usize, entries: Vec<Vec<SuperFunction>>) -> Result<Self> {
        let m = n_even + n_odd;
        if entries.len() != m || entries.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("expected a {m}x{m} matrix")));
        }
        let out = SuperMatrix { table: table.clone(), n_even, n_odd, entries };
        for r in 0..m {
            for c in 0..m {
                let e = &out.entries[r][c];
                if e.table() != table {
                    return Err(Error::TableMismatch);
                }
                if !e.has_parity(out.block_parity(r, c)) {
                    return Err(Error::ParityMismatch(format!("entry ({r}, {c}) is `{e}`")));
                }
            }
        }
        Ok(out)
    }

    pub fn identity(table: &Arc<GeneratorTable>, n_even: usize, n_odd: usize) -> Self {
        let m = n_even + n_odd;
        let entries = (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| if r == c { SuperFunction::one(table) } else { SuperFunction::zero(table) })
                    .collect()
            })
            .collect();
        SuperMatrix { table: table.clone(), n_even, n_odd, entries }
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.n_even, self.n_odd)
    }

    pub fn entry(&self, r: usize, c: usize) -> &SuperFunction {
        &self.entries[r][c]
    }

    fn block_parity(&self, r: usize, c: usize) -> Parity {
        if (r < self.n_even) == (c < self.n_even) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<SuperFunction>> {
        rows.map(|r| cols.clone().map(|c| self.entries[r][c].clone()).collect()).collect()
    }

    pub fn mul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("supermatrix product".into()));
        }
        let entries = mat_mul(&self.entries, &other.entries);
        Ok(SuperMatrix { table: self.table.clone(), n_even: self.n_even, n_odd: self.n_odd, entries })
    }

    /// Apply a substitution to every entry.
    pub fn substitute(&self, s: &Substitution) -> Result<SuperMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.substitute(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix { table: s.target().clone(), n_even: self.n_even, n_odd: self.n_odd, entries })
    }

    /// `Ber = det(A - B D^{-1} C) / det D`.
    pub fn berezinian(&self) -> Result<SuperFunction> {
        let (ne, m) = (self.n_even, self.n_even + self.n_odd);
        let a = self.block(0..ne, 0..ne);
        let b = self.block(0..ne, ne..m);
        let c = self.block(ne..m, 0..ne);
        let d = self.block(ne..m, ne..m);
        let det_d = det(&self.table, &d);
        let det_d_inv = det_d
            .inverse()
            .map_err(|_| Error::NotInvertible("odd-odd block of the supermatrix".into()))?;
        let d_inv: Vec<Vec<SuperFunction>> =
            adjugate(&self.table, &d).iter().map(|r| r.iter().map(|e| e * &det_d_inv).collect()).collect();
        let bdc = mat_mul(&mat_mul(&b, &d_inv), &c);
        let schur: Vec<Vec<SuperFunction>> =
            a.iter().zip(&bdc).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect()).collect();
        Ok(&det(&self.table, &schur) * &det_d_inv)
    }
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn mat_mul(a: &[Vec<SuperFunction>], b: &[Vec<SuperFunction>]) -> Vec<Vec<SuperFunction>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    let mut acc = SuperFunction::zero(row.first().unwrap_or(&b[0][c]).table());
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][c].is_zero() {
                            acc = &acc + &(&row[k] * &b[k][c]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant of a matrix with even (hence commuting) entries.
fn det(table: &Arc<GeneratorTable>, m: &[Vec<SuperFunction>]) -> SuperFunction {
    match m.len() {
        0 => SuperFunction::one(table),
        1 => m[0][0].clone(),
        n => {
            let mut acc = SuperFunction::zero(table);
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let term = &m[0][c] * &det(table, &minor(m, 0, c));
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<SuperFunction>], row: usize, col: usize) -> Vec<Vec<SuperFunction>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

fn adjugate(table: &Arc<GeneratorTable>, m: &[Vec<SuperFunction>]) -> Vec<Vec<SuperFunction>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![SuperFunction::one(table)]];
    }
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let cof = det(table, &minor(m, c, r));
                    if (r + c) % 2 == 0 {
                        cof
                    } else {
                        -cof
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    fn lift(t: &Arc<GeneratorTable>) -> ChartMap {
        let q = SuperFunction::named(t, "q1").unwrap();
        let p = SuperFunction::named(t, "p1").unwrap();
        let fwd = ChartMap::new(t, t, vec![q.scale(&rat_int(2))], vec![p.scale(&rat(1, 2))]).unwrap();
        let inv = ChartMap::new(t, t, vec![q.scale(&rat(1, 2))], vec![p.scale(&rat_int(2))]).unwrap();
        fwd.with_inverse(inv).unwrap()
    }

    #[test]
    fn jacobians_and_berezinians() {
        let t = GeneratorTable::darboux(1);
        let id = ChartMap::identity(&t);
        assert_eq!(id.jacobian(), SuperMatrix::identity(&t, 1, 1));
        assert_eq!(id.berezinian().unwrap(), SuperFunction::one(&t));
        let l = lift(&t);
        let j = l.jacobian();
        assert_eq!(j.entry(0, 0), &SuperFunction::constant(&t, rat_int(2)));
        assert_eq!(j.entry(1, 1), &SuperFunction::constant(&t, rat(1, 2)));
        assert_eq!(l.berezinian().unwrap(), SuperFunction::constant(&t, rat_int(4)));

        let q = SuperFunction::named(&t, "q1").unwrap();
        let p = SuperFunction::named(&t, "p1").unwrap();
        let m = ChartMap::new(&t, &t, vec![q.clone()], vec![&p + &(&q * &p)]).unwrap();
        let one_plus_q = &SuperFunction::one(&t) + &q;
        assert_eq!(m.jacobian().entry(1, 1), &one_plus_q);
        assert_eq!(m.berezinian().unwrap(), one_plus_q.inverse().unwrap());
    }

    #[test]
    fn pushforwards_under_scaling_lift() {
        let t = GeneratorTable::darboux(1);
        let l = lift(&t);
        let q = SuperFunction::named(&t, "q1").unwrap();
        let p = SuperFunction::named(&t, "p1").unwrap();
        assert_eq!(l.push(&q).unwrap(), q.scale(&rat(1, 2)));
        assert_eq!(l.push(&p).unwrap(), p.scale(&rat_int(2)));
        let one = SuperFunction::one(&t);
        let mu = l.push_density(&SDensity::plain(Rat::one(), one.clone())).unwrap();
        assert_eq!(mu.coeff().base(), &one.scale(&rat(1, 4)));
        let half = l.push_density(&SDensity::half(one.clone())).unwrap();
        assert_eq!(half.coeff().base(), &one.scale(&rat(1, 2)));
        let dq = SuperVectorField::basis(&t, Gen::Even(0), one.clone());
        assert_eq!(l.push_vf(&dq).unwrap(), dq.scale(&rat_int(2)));
        let std = ReferenceDensity::standard(&t);
        assert_eq!(l.push_reference(&std).unwrap().scale(), &rat(1, 4));
    }

    #[test]
    fn rejects_bad_inverse_and_parity() {
        let t = GeneratorTable::darboux(1);
        let q = SuperFunction::named(&t, "q1").unwrap();
        let p = SuperFunction::named(&t, "p1").unwrap();
        assert!(ChartMap::new(&t, &t, vec![p.clone()], vec![q.clone()]).is_err());
        let f = ChartMap::new(&t, &t, vec![q.scale(&rat_int(2))], vec![p.clone()]).unwrap();
        assert!(f.clone().with_inverse(ChartMap::identity(&t)).is_err());
        assert!(f.push(&q).is_err());
    }

    #[test]
    fn fractional_powers() {
        let t = GeneratorTable::darboux(1);
        let q = SuperFunction::named(&t, "q1").unwrap();
        let one = SuperFunction::one(&t);
        let sq = (&one + &q).pow(2);
        assert_eq!(power(&sq, &rat(1, 2)).unwrap(), &one + &q);
        assert!(power(&(&one + &q), &rat(1, 2)).is_err());
        assert!(power(&one.scale(&rat_int(2)), &rat(1, 3)).is_err());
    }
}
