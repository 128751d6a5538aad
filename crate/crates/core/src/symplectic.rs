//! Darboux charts, hamiltonian vector fields, the antibracket and the
//! standard BV Laplacian.

use std::fmt;
use std::sync::Arc;

use num::One;

use crate::dressed::DressedFunction;
use crate::error::{Error, Result};
use crate::forms::{FormTable, SuperForm};
use crate::poly::{rat, Rat};
use crate::superfn::SuperFunction;
use crate::table::{Gen, GeneratorTable, Parity};

/// `X = X^i ∂_i + X_i ∂^i` where `∂_i` differentiates the even member and
/// `∂^i` the odd member of pair `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperVectorField {
    table: Arc<GeneratorTable>,
    up: Vec<SuperFunction>,
    down: Vec<SuperFunction>,
}

impl SuperVectorField {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        let n = table.n_pairs();
        SuperVectorField {
            table: table.clone(),
            up: vec![SuperFunction::zero(table); n],
            down: vec![SuperFunction::zero(table); n],
        }
    }

    pub fn new(table: &Arc<GeneratorTable>, up: Vec<SuperFunction>, down: Vec<SuperFunction>) -> Result<Self> {
        let n = table.n_pairs();
        if up.len() != n || down.len() != n {
            return Err(Error::Dimension(format!("vector field needs {n} + {n} components")));
        }
        if up.iter().chain(down.iter()).any(|c| c.table() != table) {
            return Err(Error::TableMismatch);
        }
        Ok(SuperVectorField { table: table.clone(), up, down })
    }

    /// `c ∂_i` (even direction) or `c ∂^i` (odd direction).
    pub fn basis(table: &Arc<GeneratorTable>, g: Gen, c: SuperFunction) -> Self {
        let mut x = Self::zero(table);
        match g {
            Gen::Even(i) => x.up[i] = c,
            Gen::Odd(i) => x.down[i] = c,
        }
        x
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn up(&self, i: usize) -> &SuperFunction {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> &SuperFunction {
        &self.down[i]
    }

    /// Component along `∂/∂g`.
    pub fn component(&self, g: Gen) -> &SuperFunction {
        match g {
            Gen::Even(i) => &self.up[i],
            Gen::Odd(i) => &self.down[i],
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (Gen, &SuperFunction)> {
        let up = self.up.iter().enumerate().map(|(i, c)| (Gen::Even(i), c));
        let down = self.down.iter().enumerate().map(|(i, c)| (Gen::Odd(i), c));
        up.chain(down)
    }

    pub fn is_zero(&self) -> bool {
        self.up.iter().chain(self.down.iter()).all(|c| c.is_zero())
    }

    /// Parity if homogeneous: `|X^i| = |X|` and `|X_i| = |X| + 1`. `None`
    /// for the zero field and for mixed fields.
    pub fn parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        for (g, c) in self.components() {
            if c.is_zero() {
                continue;
            }
            let p = c.parity()? + g.parity();
            match found {
                None => found = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        found
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        self.components().all(|(g, c)| c.has_parity(p + g.parity()))
    }

    pub fn part(&self, p: Parity) -> Self {
        SuperVectorField {
            table: self.table.clone(),
            up: self.up.iter().map(|c| c.part(p)).collect(),
            down: self.down.iter().map(|c| c.part(p.flip())).collect(),
        }
    }

    pub fn split_parity(&self) -> [(Parity, SuperVectorField); 2] {
        [(Parity::Even, self.part(Parity::Even)), (Parity::Odd, self.part(Parity::Odd))]
    }

    /// `X(g) = X^i ∂_i g + X_i ∂^i g`.
    pub fn apply(&self, g: &SuperFunction) -> SuperFunction {
        let mut out = SuperFunction::zero(&self.table);
        for (gen, c) in self.components() {
            if !c.is_zero() {
                out = &out + &(c * &g.left_deriv(gen));
            }
        }
        out
    }

    pub fn apply_dressed(&self, g: &DressedFunction) -> DressedFunction {
        let mut base = SuperFunction::zero(&self.table);
        for (gen, c) in self.components() {
            if !c.is_zero() {
                base = &base + &(c * g.left_deriv(gen).base());
            }
        }
        g.with_base(base)
    }

    pub fn add(&self, other: &SuperVectorField) -> SuperVectorField {
        SuperVectorField {
            table: self.table.clone(),
            up: self.up.iter().zip(&other.up).map(|(a, b)| a + b).collect(),
            down: self.down.iter().zip(&other.down).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SuperVectorField) -> SuperVectorField {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> SuperVectorField {
        self.map(|x| x.scale(c))
    }

    /// `f X`, multiplying every component on the left.
    pub fn mul_left(&self, f: &SuperFunction) -> SuperVectorField {
        self.map(|x| f * x)
    }

    pub fn map(&self, mut op: impl FnMut(&SuperFunction) -> SuperFunction) -> SuperVectorField {
        SuperVectorField {
            table: self.table.clone(),
            up: self.up.iter().map(&mut op).collect(),
            down: self.down.iter().map(&mut op).collect(),
        }
    }

    pub fn try_map(&self, mut op: impl FnMut(&SuperFunction) -> Result<SuperFunction>) -> Result<SuperVectorField> {
        Ok(SuperVectorField {
            table: self.table.clone(),
            up: self.up.iter().map(&mut op).collect::<Result<_>>()?,
            down: self.down.iter().map(&mut op).collect::<Result<_>>()?,
        })
    }

    /// Graded commutator `[X, Y]` of homogeneous parts, extended bilinearly.
    pub fn commutator(&self, other: &SuperVectorField) -> SuperVectorField {
        let mut out = SuperVectorField::zero(&self.table);
        for (px, x) in self.split_parity() {
            if x.is_zero() {
                continue;
            }
            for (py, y) in other.split_parity() {
                if y.is_zero() {
                    continue;
                }
                let sign = Rat::from_integer(px.koszul(py).into());
                let part = SuperVectorField {
                    table: self.table.clone(),
                    up: x.up.iter().zip(&y.up).map(|(xc, yc)| &x.apply(yc) - &y.apply(xc).scale(&sign)).collect(),
                    down: x
                        .down
                        .iter()
                        .zip(&y.down)
                        .map(|(xc, yc)| &x.apply(yc) - &y.apply(xc).scale(&sign))
                        .collect(),
                };
                out = out.add(&part);
            }
        }
        out
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (g, c) in self.components() {
            if !c.is_zero() {
                parts.push(format!("({c})*d/d{}", self.table.name(g)));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Hamiltonian vector field: `(X_f)^i = ∂^i f`, `(X_f)_i = (-1)^{|f|} ∂_i f`.
pub fn hamiltonian_vf(f: &SuperFunction) -> Result<SuperVectorField> {
    let t = f.table();
    if f.is_zero() {
        return Ok(SuperVectorField::zero(t));
    }
    let p = f.parity().ok_or(Error::NotHomogeneous)?;
    let sign = Rat::from_integer(p.sign().into());
    let n = t.n_pairs();
    let up = (0..n).map(|i| f.left_deriv(Gen::Odd(i))).collect();
    let down = (0..n).map(|i| f.left_deriv(Gen::Even(i)).scale(&sign)).collect();
    SuperVectorField::new(t, up, down)
}

/// Hamiltonian vector field of each homogeneous part, summed.
pub fn hamiltonian_vf_linear(f: &SuperFunction) -> SuperVectorField {
    let mut out = SuperVectorField::zero(f.table());
    for (_, part) in f.split_parity() {
        out = out.add(&hamiltonian_vf(&part).expect("homogeneous part"));
    }
    out
}

/// `(f, g) = (-1)^{|f|+1} ∂^i f ∂_i g - ∂_i f ∂^i g`, bilinear in `f`.
pub fn bv_bracket(f: &SuperFunction, g: &SuperFunction) -> SuperFunction {
    let t = f.table();
    let mut out = SuperFunction::zero(t);
    for (p, part) in f.split_parity() {
        if part.is_zero() {
            continue;
        }
        let sign = -Rat::from_integer(p.sign().into());
        for i in 0..t.n_pairs() {
            let a = &part.left_deriv(Gen::Odd(i)) * &g.left_deriv(Gen::Even(i));
            let b = &part.left_deriv(Gen::Even(i)) * &g.left_deriv(Gen::Odd(i));
            out = &(&out + &a.scale(&sign)) - &b;
        }
    }
    out
}

/// Bracket with a dressed second argument.
pub fn bv_bracket_dressed(f: &SuperFunction, g: &DressedFunction) -> DressedFunction {
    let t = f.table();
    let mut base = SuperFunction::zero(t);
    for (p, part) in f.split_parity() {
        if part.is_zero() {
            continue;
        }
        let sign = -Rat::from_integer(p.sign().into());
        for i in 0..t.n_pairs() {
            let a = &part.left_deriv(Gen::Odd(i)) * g.left_deriv(Gen::Even(i)).base();
            let b = &part.left_deriv(Gen::Even(i)) * g.left_deriv(Gen::Odd(i)).base();
            base = &(&base + &a.scale(&sign)) - &b;
        }
    }
    g.with_base(base)
}

/// `△ = Σ ∂_i ∂^i`.
pub fn standard_laplacian(f: &SuperFunction) -> SuperFunction {
    let t = f.table();
    let mut out = SuperFunction::zero(t);
    for i in 0..t.n_pairs() {
        out = &out + &f.left_deriv(Gen::Odd(i)).left_deriv(Gen::Even(i));
    }
    out
}

pub fn dressed_laplacian(f: &DressedFunction) -> DressedFunction {
    let t = f.table();
    let mut base = SuperFunction::zero(t);
    for i in 0..t.n_pairs() {
        base = &base + f.left_deriv(Gen::Odd(i)).left_deriv(Gen::Even(i)).base();
    }
    f.with_base(base)
}

/// `△S - ½(S, S)`, the base of `△e^S`.
pub fn exp_laplacian_base(s: &SuperFunction) -> SuperFunction {
    &standard_laplacian(s) - &bv_bracket(s, s).scale(&rat(1, 2))
}

/// A Darboux chart together with its form generators and `ω = dp_i dq^i`.
#[derive(Clone, Debug)]
pub struct DarbouxChart {
    forms: FormTable,
}

impl DarbouxChart {
    pub fn new(table: &Arc<GeneratorTable>) -> Result<Self> {
        Ok(DarbouxChart { forms: FormTable::new(table)? })
    }

    pub fn standard(n: usize) -> Self {
        Self::new(&GeneratorTable::darboux(n)).expect("standard chart")
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        self.forms.base()
    }

    pub fn forms(&self) -> &FormTable {
        &self.forms
    }

    pub fn omega(&self) -> SuperForm {
        self.forms.omega()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(t: &Arc<GeneratorTable>, s: &str) -> SuperFunction {
        SuperFunction::named(t, s).unwrap()
    }

    #[test]
    fn hamiltonian_fields_of_coordinates() {
        let t = GeneratorTable::darboux(1);
        let one = SuperFunction::one(&t);
        let xq = hamiltonian_vf(&v(&t, "q1")).unwrap();
        assert_eq!(xq, SuperVectorField::basis(&t, Gen::Odd(0), one.clone()));
        let xp = hamiltonian_vf(&v(&t, "p1")).unwrap();
        assert_eq!(xp, SuperVectorField::basis(&t, Gen::Even(0), one.clone()));
        assert!(hamiltonian_vf(&one).unwrap().is_zero());
        assert!(hamiltonian_vf(&(&one + &v(&t, "p1"))).is_err());
    }

    #[test]
    fn bracket_of_canonical_pair() {
        let t = GeneratorTable::darboux(2);
        let (q1, p1, q2) = (v(&t, "q1"), v(&t, "p1"), v(&t, "q2"));
        assert_eq!(bv_bracket(&q1, &p1), SuperFunction::constant(&t, -Rat::one()));
        assert_eq!(bv_bracket(&p1, &q1), SuperFunction::one(&t));
        assert!(bv_bracket(&q1, &q2).is_zero());
    }

    #[test]
    fn laplacian_examples() {
        let t = GeneratorTable::darboux(2);
        let (q1, p1, q2, p2) = (v(&t, "q1"), v(&t, "p1"), v(&t, "q2"), v(&t, "p2"));
        assert!(standard_laplacian(&SuperFunction::one(&t)).is_zero());
        assert_eq!(standard_laplacian(&(&q1 * &p1)), SuperFunction::one(&t));
        let f = &(&(&q1 * &q2) * &p1) * &p2;
        assert_eq!(standard_laplacian(&f), &(&q2 * &p2) - &(&q1 * &p1));
    }

    #[test]
    fn dressed_laplacian_examples() {
        let t = GeneratorTable::darboux(2);
        let (q1, p1, p2) = (v(&t, "q1"), v(&t, "p1"), v(&t, "p2"));
        let e = DressedFunction::exp(&p1 * &p2).unwrap();
        assert!(dressed_laplacian(&e).is_zero());
        let f = DressedFunction::plain(&q1 * &p1);
        assert_eq!(dressed_laplacian(&f).base(), &SuperFunction::one(&t));
    }

    #[test]
    fn commutator_examples() {
        let t = GeneratorTable::darboux(1);
        let one = SuperFunction::one(&t);
        let q1 = v(&t, "q1");
        let d1 = SuperVectorField::basis(&t, Gen::Even(0), one.clone());
        assert!(d1.commutator(&d1).is_zero());
        let qd = SuperVectorField::basis(&t, Gen::Even(0), q1);
        assert_eq!(qd.commutator(&d1), d1.scale(&-Rat::one()));
        let xq = hamiltonian_vf(&v(&t, "q1")).unwrap();
        let xp = hamiltonian_vf(&v(&t, "p1")).unwrap();
        assert!(xq.commutator(&xp).is_zero());
    }

    #[test]
    fn apply_examples() {
        let t = GeneratorTable::darboux(1);
        let one = SuperFunction::one(&t);
        let (q1, p1) = (v(&t, "q1"), v(&t, "p1"));
        assert_eq!(SuperVectorField::basis(&t, Gen::Odd(0), one.clone()).apply(&p1), one);
        assert_eq!(SuperVectorField::basis(&t, Gen::Even(0), q1.clone()).apply(&q1), q1);
        assert!(hamiltonian_vf(&q1).unwrap().apply(&q1).is_zero());
    }
}
