//! The odd cotangent picture: functions on `ΠT*U` as multivector fields,
//! the isomorphism `φ` with forms on the base, and `𝒟 = φ⁻¹ d φ`.

use std::fmt;
use std::sync::Arc;

use crate::coeff::CoeffFn;

use crate::densities::{ReferenceDensity, SDensity};
use crate::dressed::DressedFunction;
use crate::error::{Error, Result};
use crate::poly::rat;
#[cfg(test)]
use {crate::poly::Rat, num::One};
use crate::superfn::{OddMonomial, SuperFunction};
use crate::table::{Gen, GeneratorTable};

/// Chart of `ΠT*U` together with the table of ordinary forms on `U`
/// (coordinates `q`, odd differentials `dq`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentChart {
    table: Arc<GeneratorTable>,
    forms: Arc<GeneratorTable>,
}

impl CotangentChart {
    pub fn new(table: &Arc<GeneratorTable>) -> Result<Self> {
        if table.n_odd() != table.n_pairs() || table.n_even() != table.n_pairs() + table.n_params() {
            return Err(Error::Unsupported("cotangent charts carry no extra generators".into()));
        }
        let forms = GeneratorTable::builder(table.n_pairs())
            .prefixes("q", "dq")
            .params(table.param_names())
            .build()?;
        Ok(CotangentChart { table: table.clone(), forms })
    }

    pub fn standard(n: usize) -> Self {
        Self::new(&GeneratorTable::darboux(n)).expect("standard chart")
    }

    pub fn n(&self) -> usize {
        self.table.n_pairs()
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn form_table(&self) -> &Arc<GeneratorTable> {
        &self.forms
    }

    /// The top form `dq^1 ... dq^n`.
    pub fn top_form(&self) -> BaseForm {
        let mask = (0..self.n()).fold(0u32, |m, i| m | (1 << i));
        BaseForm { value: SuperFunction::term(&self.forms, OddMonomial::from_mask(mask), CoeffFn::one()) }
    }

    /// A function of `q` (and parameters) as a 0-form.
    pub fn zero_form(&self, f: &SuperFunction) -> Result<BaseForm> {
        if f.table() != &self.table {
            return Err(Error::TableMismatch);
        }
        if f.terms().any(|(m, _)| !m.is_empty()) {
            return Err(Error::Unsupported("0-forms cannot depend on odd coordinates".into()));
        }
        Ok(BaseForm { value: SuperFunction::coeff(&self.forms, f.body()) })
    }

    /// `φ(f p_{k1}...p_{kr}) = f ι_{∂_{k1}} ... ι_{∂_{kr}} dⁿq` on the
    /// coefficient of a half-density.
    pub fn phi_function(&self, g: &SuperFunction) -> Result<BaseForm> {
        if g.table() != &self.table {
            return Err(Error::TableMismatch);
        }
        let top = self.top_form().value;
        let mut out = SuperFunction::zero(&self.forms);
        for (m, c) in g.terms() {
            let mut form = top.clone();
            for k in m.indices().collect::<Vec<_>>().into_iter().rev() {
                form = form.left_deriv(Gen::Odd(k));
            }
            out = &out + &form.mul_coeff(c);
        }
        Ok(BaseForm { value: out })
    }

    pub fn phi(&self, sigma: &SDensity) -> Result<BaseForm> {
        sigma.expect_weight(&rat(1, 2))?;
        if !sigma.coeff().is_plain() {
            return Err(Error::Unsupported("use phi_dressed for dressed half-densities".into()));
        }
        self.phi_function(sigma.coeff().base())
    }

    /// `φ(g e^E) = e^E φ(g)` once the odd part of `E` has been expanded into
    /// the base; returns the form and the remaining exponent.
    pub fn phi_dressed(&self, sigma: &SDensity) -> Result<(BaseForm, SuperFunction)> {
        sigma.expect_weight(&rat(1, 2))?;
        let f = sigma.coeff().expand_nilpotent();
        let form = self.phi_function(f.base())?;
        Ok((form, f.exponent().clone()))
    }

    pub fn phi_inverse_function(&self, alpha: &BaseForm) -> Result<SuperFunction> {
        if alpha.value.table() != &self.forms {
            return Err(Error::TableMismatch);
        }
        let full = (0..self.n()).fold(0u32, |m, i| m | (1 << i));
        let mut out = SuperFunction::zero(&self.table);
        for (m, c) in alpha.value.terms() {
            let k = OddMonomial::from_mask(full & !m.mask());
            let pk = SuperFunction::term(&self.table, k, CoeffFn::one());
            let image = self.phi_function(&pk)?;
            let eps = image.value.coefficient(*m).as_constant().expect("contraction of dⁿq has unit coefficients");
            out = &out + &pk.mul_coeff(&c.scale(&eps.recip()));
        }
        Ok(out)
    }

    pub fn phi_inverse(&self, alpha: &BaseForm) -> Result<SDensity> {
        Ok(SDensity::half(self.phi_inverse_function(alpha)?))
    }

    /// `𝒟 σ = φ⁻¹ d φ σ`.
    pub fn dee(&self, sigma: &SDensity) -> Result<SDensity> {
        self.phi_inverse(&self.phi(sigma)?.d(self))
    }

    /// The multivector `Σ f_i p_i` of a vector field `Σ f_i ∂_i` on the base.
    pub fn multivector(&self, components: &[SuperFunction]) -> Result<SuperFunction> {
        if components.len() != self.n() {
            return Err(Error::Dimension("one component per base coordinate".into()));
        }
        let mut out = SuperFunction::zero(&self.table);
        for (i, c) in components.iter().enumerate() {
            out = &out + &(c * &SuperFunction::gen(&self.table, Gen::Odd(i)));
        }
        Ok(out)
    }
}

/// Ordinary differential form on the base: a function of `q` and the odd
/// differentials `dq`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseForm {
    value: SuperFunction,
}

impl BaseForm {
    pub fn new(chart: &CotangentChart, value: SuperFunction) -> Result<Self> {
        if value.table() != chart.form_table() {
            return Err(Error::TableMismatch);
        }
        Ok(BaseForm { value })
    }

    pub fn value(&self) -> &SuperFunction {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `d = Σ dq^i ∂/∂q^i`.
    pub fn d(&self, chart: &CotangentChart) -> BaseForm {
        let t = chart.form_table();
        let mut out = SuperFunction::zero(t);
        for i in 0..chart.n() {
            let dv = self.value.left_deriv(Gen::Even(i));
            if !dv.is_zero() {
                out = &out + &(&SuperFunction::gen(t, Gen::Odd(i)) * &dv);
            }
        }
        BaseForm { value: out }
    }

    pub fn wedge(&self, other: &BaseForm) -> BaseForm {
        BaseForm { value: &self.value * &other.value }
    }

    pub fn add(&self, other: &BaseForm) -> BaseForm {
        BaseForm { value: &self.value + &other.value }
    }

    /// Contraction with `∂/∂q^k`.
    pub fn contract(&self, k: usize) -> BaseForm {
        BaseForm { value: self.value.left_deriv(Gen::Odd(k)) }
    }
}

impl fmt::Display for BaseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `v = e^W dⁿq` with `W` a function of the base coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VolumeForm {
    chart: CotangentChart,
    w: SuperFunction,
}

impl VolumeForm {
    pub fn new(chart: &CotangentChart, w: SuperFunction) -> Result<Self> {
        chart.zero_form(&w)?;
        Ok(VolumeForm { chart: chart.clone(), w })
    }

    pub fn standard(chart: &CotangentChart) -> Self {
        VolumeForm { chart: chart.clone(), w: SuperFunction::zero(chart.table()) }
    }

    pub fn log(&self) -> &SuperFunction {
        &self.w
    }

    /// `μ_v = v² = e^{2W} μ_stand`.
    pub fn mu_v(&self) -> ReferenceDensity {
        ReferenceDensity::exp(self.w.scale(&rat(2, 1))).expect("W is even")
    }

    /// `φ_v⁻¹ d φ_v X = φ⁻¹(dφX + dW∧φX)`.
    pub fn div_multivector(&self, x: &SuperFunction) -> Result<SuperFunction> {
        let c = &self.chart;
        let phi = c.phi_function(x)?;
        let dw = c.zero_form(&self.w)?.d(c);
        c.phi_inverse_function(&phi.d(c).add(&dw.wedge(&phi)))
    }

    /// Classical divergence `Σ ∂_i f^i + f^i ∂_i W` of `Σ f^i ∂_i`.
    pub fn divergence(&self, components: &[SuperFunction]) -> SuperFunction {
        let mut out = SuperFunction::zero(self.chart.table());
        for (i, f) in components.iter().enumerate() {
            out = &out + &f.left_deriv(Gen::Even(i));
            out = &out + &(f * &self.w.left_deriv(Gen::Even(i)));
        }
        out
    }

    /// The half-density `v` itself, `e^W μ_stand^{½}`.
    pub fn half_density(&self) -> SDensity {
        SDensity::new(rat(1, 2), DressedFunction::exp(self.w.clone()).expect("W is even"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        let c1 = CotangentChart::standard(1);
        let t = c1.table().clone();
        let one = SuperFunction::one(&t);
        let p1 = SuperFunction::named(&t, "p1").unwrap();
        assert_eq!(c1.phi(&SDensity::half(one.clone())).unwrap(), c1.top_form());
        assert_eq!(c1.phi(&SDensity::half(p1.clone())).unwrap().value(), &SuperFunction::one(c1.form_table()));
        let c2 = CotangentChart::standard(2);
        let p = SuperFunction::named(c2.table(), "p1").unwrap();
        let dq2 = SuperFunction::gen(c2.form_table(), Gen::Odd(1));
        assert_eq!(c2.phi(&SDensity::half(p.clone())).unwrap().value(), &dq2);
        for g in [one, p1] {
            let back = c1.phi_inverse(&c1.phi(&SDensity::half(g.clone())).unwrap()).unwrap();
            assert_eq!(back.coeff().base(), &g);
        }
        assert!(c1.phi(&SDensity::plain(Rat::one(), SuperFunction::zero(&t))).is_err());
    }

    #[test]
    fn dee_on_one_pair() {
        let c = CotangentChart::standard(1);
        let t = c.table().clone();
        let q = SuperFunction::named(&t, "q1").unwrap();
        let p = SuperFunction::named(&t, "p1").unwrap();
        let g = &(&q * &q) + &(&(&q * &q).pow(2) * &p);
        let d = c.dee(&SDensity::half(g)).unwrap();
        assert_eq!(d.coeff().base(), &(&(&q * &q) * &q).scale(&rat(4, 1)));
        assert!(c.dee(&SDensity::half(SuperFunction::one(&t))).unwrap().coeff().is_zero());
    }

    #[test]
    fn divergence_of_vector_fields() {
        let c = CotangentChart::standard(1);
        let t = c.table().clone();
        let q = SuperFunction::named(&t, "q1").unwrap();
        let x = c.multivector(std::slice::from_ref(&q)).unwrap();
        assert_eq!(VolumeForm::standard(&c).div_multivector(&x).unwrap(), SuperFunction::one(&t));
        let v = VolumeForm::new(&c, q.clone()).unwrap();
        assert_eq!(v.div_multivector(&x).unwrap(), &SuperFunction::one(&t) + &q);
        assert_eq!(v.divergence(std::slice::from_ref(&q)), &SuperFunction::one(&t) + &q);
        let d1 = c.multivector(&[SuperFunction::one(&t)]).unwrap();
        assert!(VolumeForm::standard(&c).div_multivector(&d1).unwrap().is_zero());
    }
}
