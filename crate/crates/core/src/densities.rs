//! Reference densities `c·e^S·μ_stand`, s-densities, divergences and the
//! family of BV Laplacians built from them.

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::dressed::DressedFunction;
use crate::error::{Error, Result};
use crate::poly::{fmt_rat, rat, Rat};
use crate::superfn::SuperFunction;
use crate::symplectic::{
    bv_bracket, bv_bracket_dressed, dressed_laplacian, hamiltonian_vf, standard_laplacian, SuperVectorField,
};
use crate::table::{Gen, GeneratorTable, Parity};

/// `μ = scale · e^S · μ_stand` with `S` even and `scale` a nonzero rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReferenceDensity {
    scale: Rat,
    log: SuperFunction,
}

impl ReferenceDensity {
    pub fn standard(table: &Arc<GeneratorTable>) -> Self {
        ReferenceDensity { scale: Rat::one(), log: SuperFunction::zero(table) }
    }

    /// `e^S μ_stand`.
    pub fn exp(s: SuperFunction) -> Result<Self> {
        Self::new(Rat::one(), s)
    }

    pub fn new(scale: Rat, log: SuperFunction) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::NotInvertible("density scale is zero".into()));
        }
        if !log.has_parity(Parity::Even) {
            return Err(Error::OddExponent);
        }
        Ok(ReferenceDensity { scale, log })
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    /// The function `S` with `μ = scale·e^S μ_stand`.
    pub fn log(&self) -> &SuperFunction {
        &self.log
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        self.log.table()
    }

    fn check_power(&self, s: &Rat) -> Result<()> {
        if self.scale.is_negative() && !s.is_integer() {
            return Err(Error::FractionalPower(format!(
                "power {} of a negatively scaled density",
                fmt_rat(s)
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ReferenceDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.scale.is_one() { String::new() } else { format!("{}*", fmt_rat(&self.scale)) };
        if self.log.is_zero() {
            write!(f, "{c}mu_stand")
        } else {
            write!(f, "{c}exp({})*mu_stand", self.log)
        }
    }
}

/// `σ = coeff · μ_stand^weight`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SDensity {
    weight: Rat,
    coeff: DressedFunction,
}

impl SDensity {
    pub fn new(weight: Rat, coeff: DressedFunction) -> Self {
        SDensity { weight, coeff }
    }

    pub fn plain(weight: Rat, f: SuperFunction) -> Self {
        Self::new(weight, DressedFunction::plain(f))
    }

    pub fn half(f: SuperFunction) -> Self {
        Self::plain(rat(1, 2), f)
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn coeff(&self) -> &DressedFunction {
        &self.coeff
    }

    pub fn parity(&self) -> Option<Parity> {
        self.coeff.parity()
    }

    pub fn expect_weight(&self, w: &Rat) -> Result<()> {
        if &self.weight != w {
            return Err(Error::WrongWeight { expected: fmt_rat(w), found: fmt_rat(&self.weight) });
        }
        Ok(())
    }

    /// Product of densities; weights add.
    pub fn mul(&self, other: &SDensity) -> Result<SDensity> {
        Ok(SDensity { weight: &self.weight + &other.weight, coeff: self.coeff.mul(&other.coeff)? })
    }

    pub fn same_value(&self, other: &SDensity) -> bool {
        self.weight == other.weight && self.coeff.same_value(&other.coeff)
    }
}

impl fmt::Display for SDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*mu_stand^({})", self.coeff, fmt_rat(&self.weight))
    }
}

/// `div_{μ_stand} X = ∂_i X^i - (-1)^{|X|} ∂^i X_i`, bilinear in `X`.
pub fn standard_divergence(x: &SuperVectorField) -> SuperFunction {
    let t = x.table();
    let mut out = SuperFunction::zero(t);
    for (p, part) in x.split_parity() {
        if part.is_zero() {
            continue;
        }
        let sign = Rat::from_integer(p.sign().into());
        for i in 0..t.n_pairs() {
            out = &out + &part.up(i).left_deriv(Gen::Even(i));
            out = &out - &part.down(i).left_deriv(Gen::Odd(i)).scale(&sign);
        }
    }
    out
}

/// `div_μ X = div_{μ_stand} X + X(S)`.
pub fn divergence(mu: &ReferenceDensity, x: &SuperVectorField) -> SuperFunction {
    &standard_divergence(x) + &x.apply(&mu.log)
}

/// `L_X μ = (div_μ X) μ`, as a weight-one density over `μ_stand`.
pub fn lie_derivative_density(x: &SuperVectorField, mu: &ReferenceDensity) -> SDensity {
    let base = divergence(mu, x).scale(&mu.scale);
    SDensity::new(Rat::one(), DressedFunction::new(base, mu.log.clone()).expect("even exponent"))
}

/// `Δ_μ f = △f - ½(S, f)`.
pub fn delta_mu(mu: &ReferenceDensity, f: &SuperFunction) -> SuperFunction {
    &standard_laplacian(f) - &bv_bracket(&mu.log, f).scale(&rat(1, 2))
}

/// `Δ_μ f = ½ div_μ X_f`, computed through the divergence.
pub fn delta_mu_via_divergence(mu: &ReferenceDensity, f: &SuperFunction) -> SuperFunction {
    let mut out = SuperFunction::zero(f.table());
    for (_, part) in f.split_parity() {
        if part.is_zero() {
            continue;
        }
        let x = hamiltonian_vf(&part).expect("homogeneous part");
        out = &out + &divergence(mu, &x).scale(&rat(1, 2));
    }
    out
}

/// `Δ_μ` on a dressed argument.
pub fn delta_mu_dressed(mu: &ReferenceDensity, f: &DressedFunction) -> DressedFunction {
    let lap = dressed_laplacian(f);
    let br = bv_bracket_dressed(&mu.log, f);
    lap.with_base(lap.base() - &br.base().scale(&rat(1, 2)))
}

/// `F_S = △S - ¼(S, S)`.
pub fn f_obstruction(s: &SuperFunction) -> Result<SuperFunction> {
    if !s.has_parity(Parity::Even) {
        return Err(Error::ParityMismatch("F_S needs an even S".into()));
    }
    Ok(&standard_laplacian(s) - &bv_bracket(s, s).scale(&rat(1, 4)))
}

pub fn is_compatible(mu: &ReferenceDensity) -> bool {
    f_obstruction(&mu.log).expect("log is even").is_zero()
}

/// `Δ̃_μ f = Δ_μ f + ½ F_S f`, the modification that squares to zero for
/// every reference density.
pub fn tilde_delta(mu: &ReferenceDensity, f: &SuperFunction) -> SuperFunction {
    let fs = f_obstruction(&mu.log).expect("log is even");
    &delta_mu(mu, f) + &(&fs * f).scale(&rat(1, 2))
}

/// `Δ̂_μ f = Δ(f μ^{½}) μ^{-½} = △(f e^{S/2}) e^{-S/2}`.
pub fn hat_delta(mu: &ReferenceDensity, f: &SuperFunction) -> Result<SuperFunction> {
    mu.check_power(&rat(1, 2))?;
    let half = DressedFunction::new(f.clone(), mu.log.scale(&rat(1, 2)))?;
    Ok(dressed_laplacian(&half).base().clone())
}

/// `Δ μ^{½} = 0`, tested through the dressed Laplacian of `e^{S/2}`.
pub fn check_half_density_closed(mu: &ReferenceDensity) -> Result<bool> {
    Ok(hat_delta(mu, &SuperFunction::one(mu.table()))?.is_zero())
}

/// `Δ_μ^{(s)} σ := Δ_μ(f) μ^s` for `σ = f μ^s`: re-express against `μ^s`,
/// apply `Δ_μ`, and re-express against `μ_stand^s`.
pub fn delta_s(mu: &ReferenceDensity, sigma: &SDensity) -> Result<SDensity> {
    let s = sigma.weight.clone();
    mu.check_power(&s)?;
    let shift = mu.log.scale(&s);
    let f = sigma.coeff.base().clone();
    let rel = DressedFunction::new(f, &sigma.coeff.exponent().clone() - &shift)?;
    let d = delta_mu_dressed(mu, &rel);
    let back = DressedFunction::new(d.base().clone(), d.exponent() + &shift)?;
    Ok(SDensity::new(s, back))
}

/// Darboux expansion
/// `Δ_μ^{(s)}(f μ_stand^s) = (△f + (s-½)(S,f) - (s△S + ½s(s-1)(S,S)) f) μ_stand^s`.
pub fn delta_s_expansion(mu: &ReferenceDensity, sigma: &SDensity) -> Result<SDensity> {
    let s = sigma.weight.clone();
    mu.check_power(&s)?;
    let f = &sigma.coeff;
    let lap = dressed_laplacian(f);
    let first = bv_bracket_dressed(&mu.log, f);
    let zeroth = zeroth_order_term(&mu.log, &s);
    let base = &(lap.base() + &first.base().scale(&(&s - rat(1, 2)))) - &(&zeroth * f.base());
    Ok(SDensity::new(s, f.with_base(base)))
}

/// `s△S + ½s(s-1)(S,S)`, the multiplication part of the expansion (with
/// a minus sign in front).
pub fn zeroth_order_term(log: &SuperFunction, s: &Rat) -> SuperFunction {
    let a = standard_laplacian(log).scale(s);
    let b = bv_bracket(log, log).scale(&(s * (s - Rat::one()) * rat(1, 2)));
    &a + &b
}

/// The canonical operator on half-densities: `Δ(f μ_stand^{½}) = (△f) μ_stand^{½}`.
pub fn canonical_delta_half(sigma: &SDensity) -> Result<SDensity> {
    sigma.expect_weight(&rat(1, 2))?;
    Ok(SDensity::new(sigma.weight.clone(), dressed_laplacian(&sigma.coeff)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(t: &Arc<GeneratorTable>, s: &str) -> SuperFunction {
        SuperFunction::named(t, s).unwrap()
    }

    #[test]
    fn divergences() {
        let t = GeneratorTable::darboux(2);
        let one = SuperFunction::one(&t);
        let (q1, p1, p2) = (v(&t, "q1"), v(&t, "p1"), v(&t, "p2"));
        let std = ReferenceDensity::standard(&t);
        assert!(divergence(&std, &SuperVectorField::basis(&t, Gen::Even(0), one.clone())).is_zero());
        let x = SuperVectorField::basis(&t, Gen::Odd(0), p1.clone());
        assert_eq!(divergence(&std, &x), SuperFunction::constant(&t, -Rat::one()));
        let mu = ReferenceDensity::exp(&p1 * &p2).unwrap();
        assert_eq!(divergence(&mu, &SuperVectorField::basis(&t, Gen::Odd(0), one.clone())), p2);
        let lie = lie_derivative_density(&SuperVectorField::basis(&t, Gen::Even(0), q1), &std);
        assert_eq!(lie.coeff().base(), &one);
    }

    #[test]
    fn delta_mu_examples() {
        let t = GeneratorTable::darboux(2);
        let (q1, q2, p1, p2) = (v(&t, "q1"), v(&t, "q2"), v(&t, "p1"), v(&t, "p2"));
        let std = ReferenceDensity::standard(&t);
        assert_eq!(delta_mu(&std, &(&q1 * &p1)), SuperFunction::one(&t));
        let mu = ReferenceDensity::exp(&p1 * &p2).unwrap();
        assert_eq!(delta_mu(&mu, &q1), p2.scale(&rat(1, 2)));
        assert_eq!(delta_mu_via_divergence(&mu, &q1), p2.scale(&rat(1, 2)));
        assert!(delta_mu(&mu, &SuperFunction::one(&t)).is_zero());
        let s = &(&(&q1 * &q2) * &p1) * &p2;
        let bad = ReferenceDensity::exp(s.clone()).unwrap();
        assert_eq!(f_obstruction(&s).unwrap(), &(&q2 * &p2) - &(&q1 * &p1));
        assert!(is_compatible(&mu) && is_compatible(&std) && !is_compatible(&bad));
        assert!(check_half_density_closed(&mu).unwrap());
        assert!(!check_half_density_closed(&bad).unwrap());
    }

    #[test]
    fn tilde_and_hat_agree() {
        let t = GeneratorTable::darboux(2);
        let (q1, q2, p1, p2) = (v(&t, "q1"), v(&t, "q2"), v(&t, "p1"), v(&t, "p2"));
        let s = &(&(&q1 * &q2) * &p1) * &p2;
        let mu = ReferenceDensity::exp(s.clone()).unwrap();
        let one = SuperFunction::one(&t);
        let half_f = f_obstruction(&s).unwrap().scale(&rat(1, 2));
        assert_eq!(tilde_delta(&mu, &one), half_f);
        assert_eq!(hat_delta(&mu, &one).unwrap(), half_f);
        for f in [q1.clone(), &q2 * &p1, &(&q1 * &p2) * &p1] {
            assert_eq!(tilde_delta(&mu, &f), hat_delta(&mu, &f).unwrap());
            assert!(tilde_delta(&mu, &tilde_delta(&mu, &f)).is_zero());
        }
    }

    #[test]
    fn delta_s_routes_agree() {
        let t = GeneratorTable::darboux(2);
        let (q1, q2, p1, p2) = (v(&t, "q1"), v(&t, "q2"), v(&t, "p1"), v(&t, "p2"));
        let s = &(&(&q1 * &q2) * &p1) * &p2;
        let mu = ReferenceDensity::exp(&s + &(&(&q1 * &p1) * &p2)).unwrap();
        for w in [rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1)] {
            let sigma = SDensity::plain(w, &q2 * &p2);
            let a = delta_s(&mu, &sigma).unwrap();
            let b = delta_s_expansion(&mu, &sigma).unwrap();
            assert!(a.same_value(&b), "{a} vs {b}");
        }
        let mu = ReferenceDensity::exp(&p1 * &p2).unwrap();
        let one = SDensity::plain(Rat::one(), SuperFunction::one(&t));
        assert!(delta_s(&mu, &one).unwrap().coeff().is_zero());
        let neg = ReferenceDensity::new(-Rat::one(), SuperFunction::zero(&t)).unwrap();
        assert!(delta_s(&neg, &SDensity::half(q1)).is_err());
    }

    #[test]
    fn canonical_operator() {
        let t = GeneratorTable::darboux(1);
        let (q1, p1) = (v(&t, "q1"), v(&t, "p1"));
        let sigma = SDensity::half(&q1 * &p1);
        assert_eq!(canonical_delta_half(&sigma).unwrap().coeff().base(), &SuperFunction::one(&t));
        assert!(canonical_delta_half(&SDensity::plain(Rat::one(), q1)).is_err());
    }
}
