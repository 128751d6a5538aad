//! Berezin integration, exact gaussian moments, gauge-fixing Lagrangians
//! and the checks built on them.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, Signed};

use crate::coeff::CoeffFn;
use crate::cotangent::CotangentChart;
use crate::densities::SDensity;
use crate::dressed::DressedFunction;
use crate::error::{Error, Result};
use crate::poly::{fmt_rat, rat, rat_sqrt, Monomial, Poly, Rat};
use crate::superfn::{Substitution, SuperFunction};
use crate::symplectic::dressed_laplacian;
use crate::table::{Gen, GeneratorTable, Parity};

/// `coefficient · Π_i G(a_i)` with `G(a) = √(2π/a)`. The coefficient only
/// involves parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegralValue {
    coeff: SuperFunction,
    scales: Vec<Rat>,
}

impl IntegralValue {
    pub fn new(coeff: SuperFunction, mut scales: Vec<Rat>) -> Result<Self> {
        if coeff.terms().any(|(m, _)| !m.is_empty()) {
            return Err(Error::Unsupported("integral still depends on odd generators".into()));
        }
        let t = coeff.table();
        if (0..t.n_pairs()).any(|i| coeff.contains_gen(Gen::Even(i))) {
            return Err(Error::Unsupported("integral still depends on coordinates".into()));
        }
        if coeff.is_zero() {
            scales.clear();
        }
        scales.sort();
        Ok(IntegralValue { coeff, scales })
    }

    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        IntegralValue { coeff: SuperFunction::zero(table), scales: Vec::new() }
    }

    pub fn coeff(&self) -> &SuperFunction {
        &self.coeff
    }

    pub fn scales(&self) -> &[Rat] {
        &self.scales
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Values are comparable when their gaussian prefactors match.
    pub fn comparable(&self, other: &IntegralValue) -> bool {
        self.is_zero() || other.is_zero() || self.scales == other.scales
    }

    /// Equality as numbers: `c ΠG(a) = c' ΠG(b)` iff `c = c' √(Πa / Πb)`.
    pub fn same_value(&self, other: &IntegralValue) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.scales.len() != other.scales.len() {
            return false;
        }
        let ratio = self.scales.iter().fold(Rat::one(), |acc, a| acc * a)
            / other.scales.iter().fold(Rat::one(), |acc, b| acc * b);
        match rat_sqrt(&ratio) {
            Some(r) => self.coeff == other.coeff.scale(&r),
            None => false,
        }
    }

    pub fn add(&self, other: &IntegralValue) -> Result<IntegralValue> {
        if !self.comparable(other) {
            return Err(Error::Unsupported("gaussian prefactors differ".into()));
        }
        let scales = if self.is_zero() { other.scales.clone() } else { self.scales.clone() };
        IntegralValue::new(self.coeff.try_add(&other.coeff)?, scales)
    }

    pub fn sub(&self, other: &IntegralValue) -> Result<IntegralValue> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> IntegralValue {
        IntegralValue::new(self.coeff.scale(c), self.scales.clone()).expect("scaling keeps the shape")
    }

    /// Derivative in a parameter.
    pub fn deriv_param(&self, k: usize) -> IntegralValue {
        let t = self.coeff.table();
        IntegralValue::new(self.coeff.left_deriv(Gen::Even(t.param(k))), self.scales.clone())
            .expect("derivative keeps the shape")
    }

    /// Highest power of parameter `k` in the coefficient.
    pub fn param_degree(&self, k: usize) -> u32 {
        let t = self.coeff.table();
        let b = self.coeff.body();
        b.numer().degree_in(t.param(k)).max(b.denom().degree_in(t.param(k)))
    }
}

impl fmt::Display for IntegralValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return f.write_str("0");
        }
        let c = self.coeff.to_string();
        let mut sep = "*";
        if self.scales.is_empty() {
            return f.write_str(&c);
        }
        if c == "1" {
            sep = "";
        } else if self.coeff.num_terms() == 1 && self.coeff.body().numer().num_terms() == 1 {
            f.write_str(&c)?;
        } else {
            write!(f, "({c})")?;
        }
        for a in &self.scales {
            write!(f, "{sep}G({})", fmt_rat(a))?;
            sep = "*";
        }
        Ok(())
    }
}

/// `∫ dθ_1 ... dθ_k f = ∂_{θ_1}( ... ∂_{θ_k} f)`, normalized by
/// `∫ dθ θ = 1`.
pub fn berezin_integral(f: &SuperFunction, odd_vars: &[usize]) -> SuperFunction {
    let mut out = f.clone();
    for &v in odd_vars.iter().rev() {
        out = out.left_deriv(Gen::Odd(v));
    }
    out
}

/// Berezin integral of a dressed value; the odd part of the exponent is
/// expanded first.
pub fn berezin_integral_dressed(f: &DressedFunction, odd_vars: &[usize]) -> DressedFunction {
    let g = f.expand_nilpotent();
    g.with_base(berezin_integral(g.base(), odd_vars))
}

/// Read off `a_i` from an exponent body `-½ Σ a_i y_i²`.
pub fn gaussian_scales(f: &DressedFunction, even_vars: &[usize]) -> Result<Vec<Rat>> {
    let body = f.exponent_body();
    if !body.is_polynomial() {
        return Err(Error::NonGaussian("rational exponent".into()));
    }
    let mut scales = Vec::with_capacity(even_vars.len());
    let mut expected = Poly::zero();
    for &v in even_vars {
        let m = Monomial::var_pow(v, 2);
        let c = body.numer().terms().find(|(mm, _)| **mm == m).map(|(_, c)| c.clone()).unwrap_or_default();
        let a = -c.clone() * Rat::from_integer(2.into());
        if !a.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        expected.add_term(m, c);
        scales.push(a);
    }
    if &expected != body.numer() {
        return Err(Error::NonGaussian(format!("exponent body is not diagonal in the integrated variables: {body}")));
    }
    Ok(scales)
}

/// `∫ Π dy_i  F`, for `F` with exponent body `-½ Σ a_i y_i²` (nilpotent
/// corrections allowed) and base polynomial in the `y_i`.
pub fn gaussian_integral(f: &DressedFunction, even_vars: &[usize], scales: &[Rat]) -> Result<IntegralValue> {
    let table = f.table();
    if f.is_zero() {
        return Ok(IntegralValue::zero(table));
    }
    if scales.iter().any(|a| !a.is_positive()) {
        return Err(Error::NonPositiveScale);
    }
    let g = f.expand_nilpotent();
    let found = gaussian_scales(&g, even_vars)?;
    if found != scales {
        return Err(Error::NonGaussian("exponent does not match the requested scales".into()));
    }
    let mut out = SuperFunction::zero(table);
    for (m, c) in g.base().terms() {
        if !m.is_empty() {
            return Err(Error::Unsupported("odd generators left after integration".into()));
        }
        if even_vars.iter().any(|&v| c.denom().contains_var(v)) {
            return Err(Error::NonGaussian("denominator depends on an integration variable".into()));
        }
        let mut num = Poly::zero();
        for (mono, r) in c.numer().terms() {
            let mut factor = r.clone();
            let mut rest = mono.clone();
            let mut vanishes = false;
            for (&v, a) in even_vars.iter().zip(scales) {
                let e = mono.exp(v);
                if e % 2 == 1 {
                    vanishes = true;
                    break;
                }
                factor *= double_factorial(e) / pow_rat(a, e / 2);
                rest = without_var(&rest, v);
            }
            if !vanishes {
                num.add_term(rest, factor);
            }
        }
        let term = CoeffFn::ratio(num, c.denom().clone()).expect("nonzero denominator");
        out = &out + &SuperFunction::coeff(table, term);
    }
    IntegralValue::new(out, scales.to_vec())
}

fn without_var(m: &Monomial, v: usize) -> Monomial {
    let mut e = m.exponents().to_vec();
    if v < e.len() {
        e[v] = 0;
    }
    Monomial::from_exponents(e)
}

fn double_factorial(e: u32) -> Rat {
    let mut acc = BigInt::one();
    let mut k = e as i64 - 1;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Rat::from_integer(acc)
}

fn pow_rat(a: &Rat, k: u32) -> Rat {
    (0..k).fold(Rat::one(), |acc, _| acc * a)
}

/// `∫ dⁿq dⁿp F` over a whole chart: Berezin over every odd pair
/// coordinate, then gaussian over every even one.
pub fn integrate_chart(f: &DressedFunction) -> Result<IntegralValue> {
    let t = f.table();
    let n = t.n_pairs();
    let odd: Vec<usize> = (0..n).collect();
    let g = berezin_integral_dressed(f, &odd);
    if g.is_zero() {
        return Ok(IntegralValue::zero(t));
    }
    let scales = gaussian_scales(&g, &odd)?;
    gaussian_integral(&g, &odd, &scales)
}

/// Gauge-fixing data: a chart with a pair pattern and an odd fermion `ψ`
/// in the `y` variables. The Lagrangian is `x_i = (-1)^{|x_i|} ∂ψ/∂y^i`.
#[derive(Clone, Debug)]
pub struct LagrangianGauge {
    table: Arc<GeneratorTable>,
    psi: SuperFunction,
}

impl LagrangianGauge {
    pub fn new(psi: SuperFunction) -> Result<Self> {
        let table = psi.table().clone();
        if !psi.has_parity(Parity::Odd) {
            return Err(Error::Gauge("the gauge fermion must be odd".into()));
        }
        if (0..table.n_pairs()).any(|i| psi.contains_gen(table.x_gen(i))) {
            return Err(Error::Gauge("the gauge fermion may not depend on x variables".into()));
        }
        Ok(LagrangianGauge { table, psi })
    }

    pub fn trivial(table: &Arc<GeneratorTable>) -> Self {
        LagrangianGauge { table: table.clone(), psi: SuperFunction::zero(table) }
    }

    pub fn psi(&self) -> &SuperFunction {
        &self.psi
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    /// `(-1)^{|x_i|} ∂ψ/∂y^i`.
    pub fn x_value(&self, pair: usize) -> SuperFunction {
        let x = self.table.x_gen(pair);
        let d = self.psi.left_deriv(self.table.y_gen(pair));
        if x.parity().is_odd() {
            -d
        } else {
            d
        }
    }

    fn substitution(&self) -> Substitution {
        let mut s = Substitution::identity(&self.table);
        for i in 0..self.table.n_pairs() {
            s = s.set(self.table.x_gen(i), self.x_value(i)).expect("parities follow the gauge invariants");
        }
        s
    }

    pub fn restrict(&self, f: &SuperFunction) -> Result<SuperFunction> {
        f.substitute(&self.substitution())
    }

    pub fn restrict_dressed(&self, f: &DressedFunction) -> Result<DressedFunction> {
        f.substitute(&self.substitution())
    }

    /// Odd and even `y` variables, in pair order.
    pub fn y_split(&self) -> (Vec<usize>, Vec<usize>) {
        let mut odd = Vec::new();
        let mut even = Vec::new();
        for i in 0..self.table.n_pairs() {
            match self.table.y_gen(i) {
                Gen::Odd(j) => odd.push(j),
                Gen::Even(j) => even.push(j),
            }
        }
        (odd, even)
    }

    /// `∫_{L_ψ} f = ∫ f|_L dⁿy`: Berezin over the odd `y`, then gaussian over
    /// the even `y`.
    pub fn integrate(&self, f: &DressedFunction) -> Result<IntegralValue> {
        let r = self.restrict_dressed(f)?;
        let (odd, even) = self.y_split();
        let g = berezin_integral_dressed(&r, &odd);
        if g.is_zero() {
            return Ok(IntegralValue::zero(&self.table));
        }
        let scales = gaussian_scales(&g, &even)?;
        gaussian_integral(&g, &even, &scales)
    }

    /// Both sides of `(△g)|_L = Σ_i ∂_{y^i}((∂g/∂x_i)|_L)`.
    pub fn lemma_sides(&self, g: &DressedFunction) -> Result<(DressedFunction, DressedFunction)> {
        let lhs = self.restrict_dressed(&dressed_laplacian(g))?;
        let mut rhs = DressedFunction::zero(&self.table).with_base(SuperFunction::zero(&self.table));
        let mut first = true;
        for i in 0..self.table.n_pairs() {
            let inner = self.restrict_dressed(&g.left_deriv(self.table.x_gen(i)))?;
            let term = inner.left_deriv(self.table.y_gen(i));
            rhs = if first { term } else { rhs.add(&term)? };
            first = false;
        }
        Ok((lhs, rhs))
    }

    pub fn bv_lemma_check(&self, g: &DressedFunction) -> Result<LemmaReport> {
        let (lhs, rhs) = self.lemma_sides(g)?;
        let identity = lhs.same_value(&rhs);
        let integral = self.integrate(&dressed_laplacian(g)).ok();
        Ok(LemmaReport { identity, integral })
    }

    /// `I_t = ∫_{L_{ψ_t}} f` for a family in parameter `k`, with the closure
    /// check `△f = 0` and the derivative identity `dI/dt = ∫ △(ψ̇ f)|_L`.
    pub fn invariance(&self, f: &DressedFunction, k: usize) -> Result<HarnessReport> {
        let closed = dressed_laplacian(f).is_zero();
        let value = self.integrate(f)?;
        let t_independent = value.param_degree(k) == 0;
        let psi_dot = self.psi.left_deriv(Gen::Even(self.table.param(k)));
        let moved = dressed_laplacian(&f.mul_left(&psi_dot));
        let rhs = self.integrate(&moved)?;
        let derivative_identity = value.deriv_param(k) == rhs;
        Ok(HarnessReport { closed, value, t_independent, derivative_identity })
    }

    /// `σ = f μ_stand^{½} ↦ f|_L dⁿy`.
    pub fn restrict_halfdensity(&self, sigma: &SDensity) -> Result<DressedFunction> {
        sigma.expect_weight(&rat(1, 2))?;
        self.restrict_dressed(sigma.coeff())
    }
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub identity: bool,
    /// `∫_L △g`, when the restricted integrand is gaussian.
    pub integral: Option<IntegralValue>,
}

#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub closed: bool,
    pub value: IntegralValue,
    pub t_independent: bool,
    pub derivative_identity: bool,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.closed && self.t_independent && self.derivative_identity
    }
}

/// Both sides of `∫_{ΠN*C} σ = ∫_C φ(σ)` for the coordinate subspace
/// `C = {q^j = 0, j ∈ J}` of a standard cotangent chart. `C` is oriented so
/// that `dq^J ∧ vol_C = dⁿq`.
pub fn conormal_sides(chart: &CotangentChart, sigma: &SDensity, j: &[usize]) -> Result<(IntegralValue, IntegralValue)> {
    sigma.expect_weight(&rat(1, 2))?;
    let t = chart.table();
    let n = chart.n();
    let in_j = |i: usize| j.contains(&i);
    let pattern: Vec<bool> = (0..n).map(in_j).collect();
    let gauge_table = GeneratorTable::builder(n)
        .pattern(&pattern)
        .params(t.param_names())
        .build()?;
    let gauge = LagrangianGauge::trivial(&gauge_table);
    let lhs = gauge.integrate(&sigma.coeff().with_table(&gauge_table)?)?;
    let lhs = IntegralValue::new(lhs.coeff.with_table(t)?, lhs.scales)?;

    let (form, exponent) = chart.phi_dressed(sigma)?;
    let rest: Vec<usize> = (0..n).filter(|&i| !in_j(i)).collect();
    let mask_rest = rest.iter().fold(0u32, |m, &i| m | (1 << i));
    let mask_j = j.iter().fold(0u32, |m, &i| m | (1 << i));
    let (orient, _) = crate::superfn::OddMonomial::from_mask(mask_j)
        .wedge(crate::superfn::OddMonomial::from_mask(mask_rest))
        .expect("disjoint");
    let comp = form.value().coefficient(crate::superfn::OddMonomial::from_mask(mask_rest));
    let mut restrict = Substitution::identity(t);
    for &i in j {
        restrict = restrict.set(Gen::Even(i), SuperFunction::zero(t))?;
    }
    let integrand = DressedFunction::new(
        SuperFunction::coeff(t, comp).scale(&Rat::from_integer(orient.into())),
        exponent,
    )?
    .substitute(&restrict)?;
    let rhs = if integrand.is_zero() {
        IntegralValue::zero(t)
    } else {
        let scales = gaussian_scales(&integrand, &rest)?;
        gaussian_integral(&integrand, &rest, &scales)?
    };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    #[test]
    fn berezin_examples() {
        let t = GeneratorTable::darboux(2);
        let p1 = SuperFunction::named(&t, "p1").unwrap();
        let p2 = SuperFunction::named(&t, "p2").unwrap();
        let q1 = SuperFunction::named(&t, "q1").unwrap();
        assert_eq!(berezin_integral(&p1, &[0]), SuperFunction::one(&t));
        assert!(berezin_integral(&SuperFunction::one(&t), &[0]).is_zero());
        assert_eq!(berezin_integral(&(&(&q1 * &p2) * &p1), &[0, 1]), q1);
    }

    #[test]
    fn gaussian_moments() {
        let t = GeneratorTable::darboux(1);
        let y = SuperFunction::named(&t, "q1").unwrap();
        let e = DressedFunction::exp((&y * &y).scale(&rat(-1, 2))).unwrap();
        let one = [Rat::one()];
        let v2 = gaussian_integral(&e.mul_left(&(&y * &y)), &[0], &one).unwrap();
        assert_eq!(v2.to_string(), "G(1)");
        assert!(gaussian_integral(&e.mul_left(&y), &[0], &one).unwrap().is_zero());
        let v4 = gaussian_integral(&e.mul_left(&y.pow(4)), &[0], &one).unwrap();
        assert_eq!(v4.coeff(), &SuperFunction::constant(&t, rat_int(3)));
        let bad = DressedFunction::exp((&y * &y).scale(&rat(1, 2))).unwrap();
        assert!(gaussian_integral(&bad, &[0], &one).is_err());
        let e3 = DressedFunction::exp((&y * &y).scale(&rat(-3, 2))).unwrap();
        let v = gaussian_integral(&e3.mul_left(&(&y * &y)), &[0], &[rat_int(3)]).unwrap();
        assert_eq!(v.to_string(), "1/3*G(3)");
    }

    fn mixed() -> Arc<GeneratorTable> {
        GeneratorTable::builder(2).pattern(&[false, true]).params(&["t"]).xy_names(true).build().unwrap()
    }

    #[test]
    fn mixed_gauge_values() {
        let t = mixed();
        let v = |s: &str| SuperFunction::named(&t, s).unwrap();
        let psi = &(&v("t") * &v("y1")) * &v("y2");
        let g = LagrangianGauge::new(psi).unwrap();
        assert_eq!(g.x_value(0), -(&v("t") * &v("y2")));
        assert_eq!(g.x_value(1), &v("t") * &v("y1"));
        assert_eq!(g.restrict(&v("x2")).unwrap(), &v("t") * &v("y1"));
        assert!(LagrangianGauge::new(v("x1")).is_err());
        assert!(LagrangianGauge::new(v("y1")).is_err());
    }

    #[test]
    fn worked_invariance_family() {
        let t = mixed();
        let v = |s: &str| SuperFunction::named(&t, s).unwrap();
        let (y1, y2, x1, x2) = (v("y1"), v("y2"), v("x1"), v("x2"));
        let one = SuperFunction::one(&t);
        let c = rat(5, 3);
        let base = &(&y2.scale(&c) + &(&(&(&(&y1 * &y1) - &one) * &x2) * &y2)) + &(&y1 * &x1);
        let f = DressedFunction::new(base, (&y1 * &y1).scale(&rat(-1, 2))).unwrap();
        let g = LagrangianGauge::new(&(&v("t") * &y1) * &y2).unwrap();
        let report = g.invariance(&f, 0).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.value.coeff(), &SuperFunction::constant(&t, c));
        assert_eq!(report.value.scales(), &[Rat::one()]);
    }

    #[test]
    fn conormal_of_full_base() {
        let c = CotangentChart::standard(1);
        let t = c.table().clone();
        let q = SuperFunction::named(&t, "q1").unwrap();
        let sigma = SDensity::new(rat(1, 2), DressedFunction::exp((&q * &q).scale(&rat(-1, 2))).unwrap());
        let (l, r) = conormal_sides(&c, &sigma, &[]).unwrap();
        assert_eq!(l, r);
        assert_eq!(l.to_string(), "G(1)");
        let p = SuperFunction::named(&t, "p1").unwrap();
        let (l, r) = conormal_sides(&c, &SDensity::half(&p * &(&q + &SuperFunction::constant(&t, rat_int(2)))), &[0]).unwrap();
        assert_eq!(l, r);
        assert_eq!(l.coeff(), &SuperFunction::constant(&t, rat_int(2)));
    }
}
