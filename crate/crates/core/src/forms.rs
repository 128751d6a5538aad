//! Differential forms on a chart in the total-degree convention: `dq^i` is
//! odd, `dp_i` is even.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::maps::ChartMap;
use crate::superfn::{Substitution, SuperFunction};
use crate::symplectic::SuperVectorField;
use crate::table::{Gen, GeneratorTable, Parity};

/// A chart table extended by the differentials of its pair coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormTable {
    base: Arc<GeneratorTable>,
    ext: Arc<GeneratorTable>,
}

impl FormTable {
    pub fn new(base: &Arc<GeneratorTable>) -> Result<Self> {
        let n = base.n_pairs();
        let d_even: Vec<String> = (0..n).map(|i| format!("d{}", base.odd_name(i))).collect();
        let d_odd: Vec<String> = (0..n).map(|i| format!("d{}", base.even_name(i))).collect();
        let ext = base.extended(&d_even, &d_odd)?;
        Ok(FormTable { base: base.clone(), ext })
    }

    pub fn base(&self) -> &Arc<GeneratorTable> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<GeneratorTable> {
        &self.ext
    }

    pub fn n(&self) -> usize {
        self.base.n_pairs()
    }

    /// Differential of a pair coordinate, as a generator of the extended
    /// table. `d` flips parity.
    pub fn d_gen(&self, g: Gen) -> Gen {
        match g {
            Gen::Even(i) => Gen::Odd(self.base.n_odd() + i),
            Gen::Odd(i) => Gen::Even(self.base.n_even() + i),
        }
    }

    pub fn function(&self, f: &SuperFunction) -> Result<SuperForm> {
        Ok(SuperForm { table: self.clone(), value: f.embed(&self.ext)? })
    }

    pub fn zero(&self) -> SuperForm {
        SuperForm { table: self.clone(), value: SuperFunction::zero(&self.ext) }
    }

    /// The differential `dz` of a pair coordinate as a 1-form.
    pub fn dz(&self, g: Gen) -> SuperForm {
        SuperForm { table: self.clone(), value: SuperFunction::gen(&self.ext, self.d_gen(g)) }
    }

    /// `ω = Σ dp_i dq^i`.
    pub fn omega(&self) -> SuperForm {
        let mut w = SuperFunction::zero(&self.ext);
        for i in 0..self.n() {
            w = &w + &(self.dz(Gen::Odd(i)).value() * self.dz(Gen::Even(i)).value());
        }
        SuperForm { table: self.clone(), value: w }
    }

    fn coordinates(&self) -> impl Iterator<Item = Gen> {
        let n = self.n();
        (0..n).map(Gen::Even).chain((0..n).map(Gen::Odd))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperForm {
    table: FormTable,
    value: SuperFunction,
}

impl SuperForm {
    pub fn new(table: &FormTable, value: SuperFunction) -> Result<Self> {
        if value.table() != table.ext() {
            return Err(Error::TableMismatch);
        }
        Ok(SuperForm { table: table.clone(), value })
    }

    pub fn table(&self) -> &FormTable {
        &self.table
    }

    /// Underlying element of the algebra generated by coordinates and
    /// differentials.
    pub fn value(&self) -> &SuperFunction {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn parity(&self) -> Option<Parity> {
        self.value.parity()
    }

    fn wrap(&self, value: SuperFunction) -> SuperForm {
        SuperForm { table: self.table.clone(), value }
    }

    pub fn add(&self, other: &SuperForm) -> SuperForm {
        self.wrap(&self.value + &other.value)
    }

    pub fn sub(&self, other: &SuperForm) -> SuperForm {
        self.wrap(&self.value - &other.value)
    }

    pub fn wedge(&self, other: &SuperForm) -> SuperForm {
        self.wrap(&self.value * &other.value)
    }

    /// de Rham differential `d = Σ dz^μ ∂/∂z^μ`.
    pub fn d(&self) -> SuperForm {
        let t = &self.table;
        let mut out = SuperFunction::zero(t.ext());
        for g in t.coordinates() {
            let dv = self.value.left_deriv(g);
            if !dv.is_zero() {
                out = &out + &(t.dz(g).value() * &dv);
            }
        }
        self.wrap(out)
    }

    /// Interior product `ι_X = Σ X^μ ∂/∂(dz^μ)`.
    pub fn contract(&self, x: &SuperVectorField) -> Result<SuperForm> {
        let t = &self.table;
        if x.table() != t.base() {
            return Err(Error::TableMismatch);
        }
        let mut out = SuperFunction::zero(t.ext());
        for (g, c) in x.components() {
            if c.is_zero() {
                continue;
            }
            let dv = self.value.left_deriv(t.d_gen(g));
            if !dv.is_zero() {
                out = &out + &(&c.embed(t.ext())? * &dv);
            }
        }
        Ok(self.wrap(out))
    }

    /// `L_X = ι_X d + (-1)^{|X|} d ι_X`, extended bilinearly in `X`.
    pub fn lie(&self, x: &SuperVectorField) -> Result<SuperForm> {
        let mut out = self.table.zero();
        for (p, part) in x.split_parity() {
            if part.is_zero() {
                continue;
            }
            let a = self.d().contract(&part)?;
            let b = self.contract(&part)?.d();
            out = if p.is_odd() { out.add(&a.sub(&b)) } else { out.add(&a.add(&b)) };
        }
        Ok(out)
    }

    /// `Ψ^* α` for `α` on the target chart of `Ψ`.
    pub fn pullback(&self, map: &ChartMap, source: &FormTable) -> Result<SuperForm> {
        if self.table.base() != map.target() || source.base() != map.source() {
            return Err(Error::TableMismatch);
        }
        let tt = &self.table;
        let n = tt.n();
        let src = source.ext();
        let tgt_base = tt.base();
        let mut even = Vec::with_capacity(tt.ext().n_even());
        let mut odd = Vec::with_capacity(tt.ext().n_odd());
        for i in 0..n {
            even.push(map.image(Gen::Even(i)).embed(src)?);
        }
        for k in 0..tgt_base.n_params() {
            even.push(SuperFunction::gen(src, Gen::Even(map.source().param(k))));
        }
        for i in 0..n {
            odd.push(map.image(Gen::Odd(i)).embed(src)?);
        }
        for i in 0..n {
            even.push(source.function(map.image(Gen::Odd(i)))?.d().value);
        }
        for i in 0..n {
            odd.push(source.function(map.image(Gen::Even(i)))?.d().value);
        }
        let s = Substitution::new(tt.ext(), src, even, odd)?;
        Ok(SuperForm { table: source.clone(), value: self.value.substitute(&s)? })
    }
}

impl fmt::Display for SuperForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// True iff `Ψ^* ω' = ω`.
pub fn is_symplectomorphism(map: &ChartMap) -> Result<bool> {
    if map.source().n_pairs() != map.target().n_pairs() {
        return Err(Error::Dimension("source and target have different dimension".into()));
    }
    let src = FormTable::new(map.source())?;
    let tgt = FormTable::new(map.target())?;
    Ok(tgt.omega().pullback(map, &src)? == src.omega())
}
