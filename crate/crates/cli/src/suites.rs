//! Property suites: seeded random trials of the identities each module
//! promises, collected into report cases.

use std::fmt::Display;
use std::sync::Arc;

use bvcalc_core::cotangent::{CotangentChart, VolumeForm};
use bvcalc_core::densities::*;
use bvcalc_core::forms::is_symplectomorphism;
use bvcalc_core::integration::{conormal_sides, integrate_chart, LagrangianGauge};
use bvcalc_core::sample::{pattern_table, y_gaussian, Sampler};
use bvcalc_core::symplectic::*;
use bvcalc_core::{
    rat, rat_int, CoeffFn, DarbouxChart, DressedFunction, Gen, GeneratorTable, Parity, Rat, SuperFunction,
};
use num::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::report::Case;

type Outcome = bvcalc_core::Result<()>;

/// Accumulates the inputs and comparisons of one trial.
#[derive(Default)]
pub struct Trial {
    inputs: Vec<String>,
    expected: Vec<String>,
    actual: Vec<String>,
    pass: bool,
}

impl Trial {
    fn new() -> Self {
        Trial { pass: true, ..Default::default() }
    }

    fn input(&mut self, label: &str, v: impl Display) {
        self.inputs.push(format!("{label} = {v}"));
    }

    /// Record `actual == expected`.
    fn eq<T: PartialEq + Display>(&mut self, actual: &T, expected: &T) {
        self.check(actual, expected, actual == expected);
    }

    fn check(&mut self, actual: impl Display, expected: impl Display, ok: bool) {
        self.actual.push(actual.to_string());
        self.expected.push(expected.to_string());
        self.pass &= ok;
    }

    fn zero(&mut self, v: &SuperFunction) {
        self.check(v, "0", v.is_zero());
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.check(format!("{what}: {ok}"), format!("{what}: true"), ok);
    }
}

pub struct Property {
    pub name: &'static str,
    pub pairs: (usize, usize),
    /// `None` runs `size` trials, `Some(k)` runs exactly `k`.
    pub trials: Option<usize>,
    pub run: fn(&mut Sampler, usize, &mut Trial) -> Outcome,
}

const fn prop(name: &'static str, hi: usize, run: fn(&mut Sampler, usize, &mut Trial) -> Outcome) -> Property {
    Property { name, pairs: (1, hi), trials: None, run }
}

pub const SUITES: [&str; 9] =
    ["algebra", "bracket", "laplacian", "densities", "transpose", "canonical", "maps", "cotangent", "gaugefix"];

pub fn default_size(suite: &str) -> usize {
    match suite {
        "algebra" | "bracket" | "laplacian" => 200,
        "densities" | "canonical" | "cotangent" => 100,
        _ => 50,
    }
}

pub fn properties(suite: &str) -> Option<Vec<Property>> {
    Some(match suite {
        "algebra" => vec![
            prop("supercommutative", 3, supercommutative),
            prop("associative", 3, associative),
            prop("leibniz", 3, derivative_leibniz),
            prop("derivatives_commute", 3, derivatives_commute),
            prop("right_derivative", 3, right_derivative),
        ],
        "laplacian" => vec![
            prop("square_zero", 3, laplacian_square),
            prop("product", 3, laplacian_product),
            prop("exponential", 3, laplacian_exponential),
            prop("derives_bracket", 3, laplacian_bracket),
        ],
        "bracket" => vec![
            prop("antisymmetry", 3, bracket_antisymmetry),
            prop("leibniz", 3, bracket_leibniz),
            prop("jacobi", 3, bracket_jacobi),
            prop("hamiltonian_morphism", 3, hamiltonian_morphism),
            prop("contraction", 3, hamiltonian_contraction),
        ],
        "densities" => vec![
            prop("div_naturality", 3, div_naturality),
            prop("div_density_change", 3, div_density_change),
            prop("div_module", 3, div_module),
            Property { name: "div_integral", pairs: (1, 2), trials: None, run: div_integral },
            prop("delta_forms", 3, delta_forms),
            prop("delta_square", 3, delta_square),
            prop("delta_product", 3, delta_product),
            prop("delta_exponential", 3, delta_exponential),
        ],
        "transpose" => vec![
            Property { name: "symmetry", pairs: (1, 2), trials: None, run: transpose_symmetry },
            Property { name: "bracket_integral", pairs: (1, 2), trials: None, run: bracket_integral },
        ],
        "canonical" => vec![
            prop("compatible_agrees", 3, canonical_agrees),
            prop("square_zero", 3, canonical_square),
            prop("half_weight_expansion", 3, half_weight_expansion),
        ],
        "maps" => vec![
            prop("equivariance", 3, equivariance),
            Property { name: "compatible_preserved", pairs: (2, 3), trials: None, run: compatible_preserved },
            Property { name: "berezinian_product", pairs: (1, 2), trials: None, run: berezinian_product },
            prop("chain_rule", 3, chain_rule),
        ],
        "cotangent" => vec![
            prop("phi_intertwines", 3, phi_intertwines),
            prop("dee_square", 3, dee_square),
            prop("mu_v", 3, mu_v_compatible),
            prop("divergence", 3, multivector_divergence),
        ],
        "gaugefix" => vec![
            prop("bv_lemma", 3, bv_lemma),
            prop("closed_invariance", 3, closed_invariance),
            Property { name: "worked_family", pairs: (2, 2), trials: Some(5), run: worked_family },
            Property { name: "pure_witness", pairs: (2, 2), trials: Some(5), run: pure_witness },
            prop("conormal", 3, conormal),
        ],
        _ => return None,
    })
}

/// Seed of trial `i` of `suite/name`, independent of scheduling.
pub fn trial_seed(seed: u64, suite: &str, name: &str, i: usize) -> u64 {
    let digest = Sha256::digest(format!("{seed}:{suite}:{name}:{i}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

fn run_trial(p: &Property, suite: &str, seed: u64, i: usize) -> Case {
    let mut s = Sampler::new(trial_seed(seed, suite, p.name, i));
    let (lo, hi) = p.pairs;
    let n = s.rng().gen_range(lo..=hi);
    let mut trial = Trial::new();
    trial.input("pairs", n);
    let outcome = (p.run)(&mut s, n, &mut trial);
    if let Err(e) = outcome {
        trial.check(format!("error: {e}"), "no error", false);
    }
    Case {
        id: format!("{suite}/{}/{i:04}", p.name),
        inputs: trial.inputs,
        expected: trial.expected.join("; "),
        actual: trial.actual.join("; "),
        pass: trial.pass,
    }
}

/// All cases of the named suites, sorted by id.
pub fn run(suites: &[&str], seed: u64, size: Option<usize>) -> Option<Vec<Case>> {
    let mut jobs = Vec::new();
    for &suite in suites {
        let size = size.unwrap_or_else(|| default_size(suite));
        for p in properties(suite)? {
            for i in 0..p.trials.unwrap_or(size) {
                jobs.push((suite, p.name, i));
            }
        }
    }
    let mut cases: Vec<Case> = jobs
        .par_iter()
        .map(|&(suite, name, i)| {
            let props = properties(suite).expect("known suite");
            let p = props.iter().find(|p| p.name == name).expect("known property");
            run_trial(p, suite, seed, i)
        })
        .collect();
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    Some(cases)
}

fn parity(s: &mut Sampler) -> Parity {
    if s.rng().gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn sign(p: Parity) -> Rat {
    Rat::from_integer(p.sign().into())
}

fn koszul(a: Parity, b: Parity) -> Rat {
    Rat::from_integer(a.koszul(b).into())
}

fn random_gen(s: &mut Sampler, n: usize) -> Gen {
    let i = s.rng().gen_range(0..n);
    if s.rng().gen_bool(0.5) {
        Gen::Odd(i)
    } else {
        Gen::Even(i)
    }
}

fn random_density(s: &mut Sampler, t: &Arc<GeneratorTable>) -> bvcalc_core::Result<ReferenceDensity> {
    ReferenceDensity::exp(s.function(t, Parity::Even))
}

// algebra

fn supercommutative(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (a, b) = (parity(s), parity(s));
    let f = s.function(&t, a);
    let g = s.function(&t, b);
    tr.input("f", &f);
    tr.input("g", &g);
    tr.eq(&(&f * &g), &(&g * &f).scale(&koszul(a, b)));
    Ok(())
}

fn associative(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (f, g, h) = (s.mixed_function(&t), s.mixed_function(&t), s.mixed_function(&t));
    tr.input("f", &f);
    tr.input("g", &g);
    tr.input("h", &h);
    tr.eq(&(&(&f * &g) * &h), &(&f * &(&g * &h)));
    tr.eq(&(&f * &(&g + &h)), &(&(&f * &g) + &(&f * &h)));
    Ok(())
}

fn derivative_leibniz(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let a = parity(s);
    let f = s.function(&t, a);
    let g = s.mixed_function(&t);
    let d = random_gen(s, n);
    tr.input("f", &f);
    tr.input("g", &g);
    tr.input("d", t.name(d));
    let rhs = &(&f.left_deriv(d) * &g) + &(&f * &g.left_deriv(d)).scale(&koszul(d.parity(), a));
    tr.eq(&(&f * &g).left_deriv(d), &rhs);
    Ok(())
}

fn derivatives_commute(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let f = s.mixed_function(&t);
    let (a, b) = (random_gen(s, n), random_gen(s, n));
    tr.input("f", &f);
    tr.input("a", t.name(a));
    tr.input("b", t.name(b));
    let ab = f.left_deriv(b).left_deriv(a);
    tr.eq(&ab, &f.left_deriv(a).left_deriv(b).scale(&koszul(a.parity(), b.parity())));
    Ok(())
}

fn right_derivative(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let a = parity(s);
    let f = s.function(&t, a);
    tr.input("f", &f);
    for i in 0..n {
        tr.eq(&f.right_deriv(Gen::Even(i)), &f.left_deriv(Gen::Even(i)));
        tr.eq(&f.right_deriv(Gen::Odd(i)), &f.left_deriv(Gen::Odd(i)).scale(&-sign(a)));
    }
    Ok(())
}

// laplacian

fn laplacian_square(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let f = s.mixed_function(&t);
    tr.input("f", &f);
    tr.zero(&standard_laplacian(&standard_laplacian(&f)));
    Ok(())
}

fn laplacian_product(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let a = parity(s);
    let f = s.function(&t, a);
    let g = s.mixed_function(&t);
    tr.input("f", &f);
    tr.input("g", &g);
    let e = sign(a);
    let rhs = &(&(&standard_laplacian(&f) * &g) + &(&f * &standard_laplacian(&g)).scale(&e))
        - &bv_bracket(&f, &g).scale(&e);
    tr.eq(&standard_laplacian(&(&f * &g)), &rhs);
    Ok(())
}

fn laplacian_exponential(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let sl = s.function(&t, Parity::Even);
    tr.input("S", &sl);
    let lap = dressed_laplacian(&DressedFunction::exp(sl.clone())?);
    let expected = &standard_laplacian(&sl) - &bv_bracket(&sl, &sl).scale(&rat(1, 2));
    tr.eq(lap.base(), &expected);
    tr.eq(lap.exponent(), &sl);
    Ok(())
}

fn laplacian_bracket(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let a = parity(s);
    let f = s.function(&t, a);
    let g = s.mixed_function(&t);
    tr.input("f", &f);
    tr.input("g", &g);
    let rhs = &bv_bracket(&standard_laplacian(&f), &g) - &bv_bracket(&f, &standard_laplacian(&g)).scale(&sign(a));
    tr.eq(&standard_laplacian(&bv_bracket(&f, &g)), &rhs);
    Ok(())
}

// bracket

fn homogeneous_pair(s: &mut Sampler, t: &Arc<GeneratorTable>, tr: &mut Trial) -> (Parity, Parity, SuperFunction, SuperFunction) {
    let (a, b) = (parity(s), parity(s));
    let f = s.function(t, a);
    let g = s.function(t, b);
    tr.input("f", &f);
    tr.input("g", &g);
    (a, b, f, g)
}

fn bracket_antisymmetry(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (a, b, f, g) = homogeneous_pair(s, &t, tr);
    tr.eq(&bv_bracket(&g, &f), &bv_bracket(&f, &g).scale(&-koszul(a.flip(), b.flip())));
    Ok(())
}

fn bracket_leibniz(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (a, b, f, g) = homogeneous_pair(s, &t, tr);
    let h = s.mixed_function(&t);
    tr.input("h", &h);
    let rhs = &(&bv_bracket(&f, &g) * &h) + &(&g * &bv_bracket(&f, &h)).scale(&koszul(a.flip(), b));
    tr.eq(&bv_bracket(&f, &(&g * &h)), &rhs);
    Ok(())
}

fn bracket_jacobi(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (a, b, f, g) = homogeneous_pair(s, &t, tr);
    let h = s.mixed_function(&t);
    tr.input("h", &h);
    let k = koszul(a.flip(), b.flip());
    let rhs = &bv_bracket(&bv_bracket(&f, &g), &h) + &bv_bracket(&g, &bv_bracket(&f, &h)).scale(&k);
    tr.eq(&bv_bracket(&f, &bv_bracket(&g, &h)), &rhs);
    Ok(())
}

fn hamiltonian_morphism(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (_, _, f, g) = homogeneous_pair(s, &t, tr);
    let lhs = hamiltonian_vf(&f)?.commutator(&hamiltonian_vf(&g)?);
    tr.eq(&lhs, &hamiltonian_vf(&bv_bracket(&f, &g))?);
    Ok(())
}

fn hamiltonian_contraction(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let chart = DarbouxChart::standard(n);
    let a = parity(s);
    let f = s.function(chart.table(), a);
    tr.input("f", &f);
    let lhs = chart.omega().contract(&hamiltonian_vf(&f)?)?;
    tr.eq(&lhs, &chart.forms().function(&f)?.d());
    Ok(())
}

// densities

fn div_naturality(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let mu = random_density(s, &t)?;
    let px = parity(s);
    let x = s.vector_field(&t, px);
    tr.input("mu", &mu);
    tr.input("X", &x);
    for psi in s.map_family(n)? {
        let lhs = psi.push(&divergence(&mu, &x))?;
        tr.eq(&lhs, &divergence(&psi.push_reference(&mu)?, &psi.push_vf(&x)?));
    }
    Ok(())
}

fn div_density_change(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let sl = s.function(&t, Parity::Even);
    let px = parity(s);
    let x = s.vector_field(&t, px);
    tr.input("S", &sl);
    tr.input("X", &x);
    let mu = ReferenceDensity::exp(sl.clone())?;
    let stand = ReferenceDensity::standard(&t);
    tr.eq(&divergence(&mu, &x), &(&divergence(&stand, &x) + &x.apply(&sl)));
    Ok(())
}

fn div_module(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let mu = random_density(s, &t)?;
    let (px, pf) = (parity(s), parity(s));
    let x = s.vector_field(&t, px);
    let f = s.function(&t, pf);
    tr.input("mu", &mu);
    tr.input("X", &x);
    tr.input("f", &f);
    let rhs = &(&f * &divergence(&mu, &x)) + &x.apply(&f).scale(&koszul(pf, px));
    tr.eq(&divergence(&mu, &x.mul_left(&f)), &rhs);
    Ok(())
}

fn div_integral(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (g, _) = s.gaussian_log(&t);
    let px = parity(s);
    let x = s.vector_field(&t, px);
    tr.input("S", &g);
    tr.input("X", &x);
    let mu = ReferenceDensity::exp(g.clone())?;
    let total = integrate_chart(&DressedFunction::new(divergence(&mu, &x), g)?)?;
    tr.check(&total, "0", total.is_zero());
    Ok(())
}

fn delta_forms(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let mu = random_density(s, &t)?;
    let f = s.mixed_function(&t);
    tr.input("mu", &mu);
    tr.input("f", &f);
    tr.eq(&delta_mu(&ReferenceDensity::standard(&t), &f), &standard_laplacian(&f));
    let xs = hamiltonian_vf(mu.log())?.apply(&f);
    tr.eq(&delta_mu(&mu, &f), &(&standard_laplacian(&f) + &xs.scale(&rat(1, 2))));
    tr.eq(&delta_mu(&mu, &f), &delta_mu_via_divergence(&mu, &f));
    Ok(())
}

fn delta_square(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let mu = random_density(s, &t)?;
    let g = s.mixed_function(&t);
    tr.input("mu", &mu);
    tr.input("g", &g);
    let fs = f_obstruction(mu.log())?;
    tr.eq(&delta_mu(&mu, &delta_mu(&mu, &g)), &bv_bracket(&fs, &g).scale(&rat(-1, 2)));
    Ok(())
}

fn delta_product(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let mu = random_density(s, &t)?;
    let a = parity(s);
    let f = s.function(&t, a);
    let g = s.mixed_function(&t);
    tr.input("mu", &mu);
    tr.input("f", &f);
    tr.input("g", &g);
    let e = sign(a);
    let rhs = &(&(&delta_mu(&mu, &f) * &g) + &(&f * &delta_mu(&mu, &g)).scale(&e)) - &bv_bracket(&f, &g).scale(&e);
    tr.eq(&delta_mu(&mu, &(&f * &g)), &rhs);
    Ok(())
}

fn delta_exponential(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let mu = random_density(s, &t)?;
    let h = s.function(&t, Parity::Even);
    tr.input("mu", &mu);
    tr.input("S", &h);
    let de = delta_mu_dressed(&mu, &DressedFunction::exp(h.clone())?);
    tr.eq(de.base(), &(&delta_mu(&mu, &h) - &bv_bracket(&h, &h).scale(&rat(1, 2))));
    Ok(())
}

// transpose

fn transpose_symmetry(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let w = [Rat::zero(), rat(1, 4), rat(1, 2), Rat::one()][s.rng().gen_range(0..4)].clone();
    tr.input("s", bvcalc_core::poly::fmt_rat(&w));
    let mu = random_density(s, &t)?;
    let a = parity(s);
    let sigma = SDensity::plain(w.clone(), s.function(&t, a));
    let (gl, _) = s.gaussian_log(&t);
    let tau = SDensity::new(Rat::one() - &w, DressedFunction::new(s.mixed_function(&t), gl)?);
    tr.input("mu", &mu);
    tr.input("sigma", &sigma);
    tr.input("tau", &tau);
    let lhs = delta_s(&mu, &sigma)?.mul(&tau)?;
    let rhs = sigma.mul(&delta_s(&mu, &tau)?)?;
    let total = integrate_chart(&lhs.coeff().sub(&rhs.coeff().scale(&sign(a)))?)?;
    tr.check(&total, "0", total.is_zero());
    Ok(())
}

fn bracket_integral(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let (gl, _) = s.gaussian_log(&t);
    let mu = ReferenceDensity::exp(gl.clone())?;
    let f = s.mixed_function(&t);
    let g = s.mixed_function(&t);
    tr.input("mu", &mu);
    tr.input("f", &f);
    tr.input("g", &g);
    let lhs = integrate_chart(&DressedFunction::new(bv_bracket(&f, &g), gl.clone())?)?;
    let rhs = integrate_chart(&DressedFunction::new((&f * &delta_mu(&mu, &g)).scale(&rat_int(2)), gl)?)?;
    let ok = lhs.sub(&rhs).map(|d| d.is_zero()).unwrap_or(false);
    tr.check(&lhs, &rhs, ok);
    Ok(())
}

// canonical

/// A compatible density: the standard one, `e^{c p1 pn}`, or `μ_v`.
fn compatible_density(s: &mut Sampler, n: usize) -> bvcalc_core::Result<ReferenceDensity> {
    let t = GeneratorTable::darboux(n);
    match s.rng().gen_range(0..3) {
        0 => Ok(ReferenceDensity::standard(&t)),
        1 => {
            let p = (&SuperFunction::gen(&t, Gen::Odd(0)) * &SuperFunction::gen(&t, Gen::Odd(n - 1))).scale(&s.rational());
            ReferenceDensity::exp(p)
        }
        _ => {
            let c = CotangentChart::standard(n);
            let vars: Vec<usize> = (0..n).collect();
            let w = SuperFunction::coeff(c.table(), CoeffFn::poly(s.poly(&vars, 3)));
            Ok(VolumeForm::new(&c, w)?.mu_v())
        }
    }
}

fn canonical_agrees(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let mu = compatible_density(s, n)?;
    let sigma = SDensity::half(s.mixed_function(mu.table()));
    tr.input("mu", &mu);
    tr.input("sigma", &sigma);
    tr.holds("compatible", is_compatible(&mu));
    let a = delta_s(&mu, &sigma)?;
    let b = canonical_delta_half(&sigma)?;
    tr.check(&a, &b, a.same_value(&b));
    Ok(())
}

fn canonical_square(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let sigma = SDensity::half(s.mixed_function(&t));
    tr.input("sigma", &sigma);
    let twice = canonical_delta_half(&canonical_delta_half(&sigma)?)?;
    tr.zero(twice.coeff().base());
    Ok(())
}

fn half_weight_expansion(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let sl = s.function(&t, Parity::Even);
    let mu = ReferenceDensity::exp(sl.clone())?;
    let f = s.mixed_function(&t);
    tr.input("S", &sl);
    tr.input("f", &f);
    let z = zeroth_order_term(&sl, &rat(1, 2));
    let a = delta_s(&mu, &SDensity::half(f.clone()))?;
    tr.eq(a.coeff().base(), &(&standard_laplacian(&f) - &(&z * &f)));
    tr.eq(&z, &f_obstruction(&sl)?.scale(&rat(1, 2)));
    Ok(())
}

// maps

fn equivariance(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    let w = [Rat::zero(), rat(1, 2), Rat::one()][s.rng().gen_range(0..3)].clone();
    tr.input("s", bvcalc_core::poly::fmt_rat(&w));
    let mu = random_density(s, &t)?;
    let a = parity(s);
    let sigma = SDensity::new(w, DressedFunction::plain(s.function(&t, a)));
    tr.input("mu", &mu);
    tr.input("sigma", &sigma);
    for psi in s.map_family(n)? {
        if !is_symplectomorphism(&psi)? {
            continue;
        }
        let lhs = psi.push_density(&delta_s(&mu, &sigma)?)?;
        let rhs = delta_s(&psi.push_reference(&mu)?, &psi.push_density(&sigma)?)?;
        tr.check(&lhs, &rhs, lhs.same_value(&rhs));
    }
    Ok(())
}

fn compatible_preserved(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let mu = compatible_density(s, n)?;
    tr.input("mu", &mu);
    for psi in s.map_family(n)? {
        if is_symplectomorphism(&psi)? {
            tr.holds("compatible", is_compatible(&psi.push_reference(&mu)?));
        }
    }
    Ok(())
}

fn berezinian_product(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = GeneratorTable::darboux(n);
    s.max_terms = 2;
    let m = s.supermatrix(&t);
    let k = s.supermatrix(&t);
    tr.input("M", &m);
    tr.input("N", &k);
    tr.eq(&m.mul(&k)?.berezinian()?, &(&m.berezinian()? * &k.berezinian()?));
    Ok(())
}

fn chain_rule(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let maps = s.map_family(n)?;
    let phi = &maps[0];
    tr.input("phi", phi);
    for psi in &maps {
        let comp = psi.compose(phi)?;
        let expected = &phi.pull(&psi.berezinian()?)? * &phi.berezinian()?;
        tr.eq(&comp.berezinian()?, &expected);
    }
    Ok(())
}

// cotangent

fn phi_intertwines(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let c = CotangentChart::standard(n);
    let sigma = SDensity::half(s.mixed_function(c.table()));
    tr.input("sigma", &sigma);
    tr.eq(&c.phi(&canonical_delta_half(&sigma)?)?, &c.phi(&sigma)?.d(&c));
    let dee = c.dee(&sigma)?;
    let can = canonical_delta_half(&sigma)?;
    tr.check(&dee, &can, dee.same_value(&can));
    Ok(())
}

fn dee_square(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let c = CotangentChart::standard(n);
    let sigma = SDensity::half(s.mixed_function(c.table()));
    tr.input("sigma", &sigma);
    tr.zero(c.dee(&c.dee(&sigma)?)?.coeff().base());
    let k = s.rational();
    let top = c.phi_inverse(&c.top_form().wedge(&c.zero_form(&SuperFunction::constant(c.table(), k))?))?;
    tr.zero(c.dee(&top)?.coeff().base());
    Ok(())
}

fn volume_form(s: &mut Sampler, c: &CotangentChart) -> bvcalc_core::Result<VolumeForm> {
    let vars: Vec<usize> = (0..c.n()).collect();
    VolumeForm::new(c, SuperFunction::coeff(c.table(), CoeffFn::poly(s.poly(&vars, 3))))
}

fn mu_v_compatible(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let c = CotangentChart::standard(n);
    let v = volume_form(s, &c)?;
    tr.input("W", v.log());
    let mu = v.mu_v();
    tr.holds("compatible", is_compatible(&mu));
    tr.holds("half density closed", check_half_density_closed(&mu)?);
    Ok(())
}

fn multivector_divergence(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let c = CotangentChart::standard(n);
    let v = volume_form(s, &c)?;
    let vars: Vec<usize> = (0..n).collect();
    let comps: Vec<SuperFunction> =
        (0..n).map(|_| SuperFunction::coeff(c.table(), CoeffFn::poly(s.poly(&vars, 3)))).collect();
    let x = c.multivector(&comps)?;
    tr.input("W", v.log());
    tr.input("X", &x);
    let d = v.div_multivector(&x)?;
    tr.eq(&d, &v.divergence(&comps));
    tr.eq(&d, &hat_delta(&v.mu_v(), &x)?);
    Ok(())
}

// gaugefix

fn mixed_pattern(s: &mut Sampler, n: usize) -> Arc<GeneratorTable> {
    let bits = s.rng().gen_range(1..(1u32 << n));
    pattern_table(n, bits)
}

fn bv_lemma(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = mixed_pattern(s, n);
    let gauge = LagrangianGauge::new(s.gauge_fermion(&t))?;
    let g = DressedFunction::new(s.mixed_function(&t), y_gaussian(&t))?;
    tr.input("psi", gauge.psi());
    tr.input("g", &g);
    let report = gauge.bv_lemma_check(&g)?;
    tr.holds("total derivative", report.identity);
    if let Some(i) = report.integral {
        tr.check(&i, "0", i.is_zero());
    }
    Ok(())
}

fn closed_invariance(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let t = mixed_pattern(s, n);
    let gauge = LagrangianGauge::new(s.gauge_fermion(&t))?;
    let w = y_gaussian(&t);
    let exact = dressed_laplacian(&DressedFunction::new(s.mixed_function(&t), w.clone())?);
    let free = LagrangianGauge::trivial(&t).restrict(&s.mixed_function(&t))?;
    let f = exact.add(&DressedFunction::new(free, w)?)?;
    tr.input("psi", gauge.psi());
    tr.input("f", &f);
    let report = gauge.invariance(&f, 0)?;
    tr.holds("closed", report.closed);
    tr.holds("t independent", report.t_independent);
    tr.holds("derivative identity", report.derivative_identity);
    Ok(())
}

fn worked_table() -> Arc<GeneratorTable> {
    pattern_table(2, 0b10)
}

fn worked_gauge(t: &Arc<GeneratorTable>) -> bvcalc_core::Result<LagrangianGauge> {
    let named = |s: &str| SuperFunction::named(t, s);
    LagrangianGauge::new(&(&named("t")? * &named("y1")?) * &named("y2")?)
}

fn worked_family(s: &mut Sampler, _: usize, tr: &mut Trial) -> Outcome {
    let t = worked_table();
    let c = s.rational();
    let named = |s: &str| SuperFunction::named(&t, s);
    let (y1, y2, x1, x2) = (named("y1")?, named("y2")?, named("x1")?, named("x2")?);
    let one = SuperFunction::one(&t);
    let base = &(&y2.scale(&c) + &(&(&(&(&y1 * &y1) - &one) * &x2) * &y2)) + &(&y1 * &x1);
    let f = DressedFunction::new(base, (&y1 * &y1).scale(&rat(-1, 2)))?;
    let gauge = worked_gauge(&t)?;
    tr.input("c", bvcalc_core::poly::fmt_rat(&c));
    tr.input("f", &f);
    let report = gauge.invariance(&f, 0)?;
    tr.holds("closed", report.closed);
    tr.holds("t independent", report.t_independent);
    let expected = bvcalc_core::IntegralValue::new(SuperFunction::constant(&t, c), vec![Rat::one()])?;
    tr.eq(&report.value, &expected);
    Ok(())
}

fn pure_witness(s: &mut Sampler, _: usize, tr: &mut Trial) -> Outcome {
    let t = worked_table();
    let named = |s: &str| SuperFunction::named(&t, s);
    let y1 = named("y1")?;
    let h = s.function(&t, Parity::Even);
    let h = LagrangianGauge::trivial(&t).restrict(&h)?;
    let g = DressedFunction::new(&named("x1")? * &h, (&y1 * &y1).scale(&rat(-1, 2)))?;
    tr.input("g", &g);
    let report = worked_gauge(&t)?.invariance(&dressed_laplacian(&g), 0)?;
    tr.holds("passed", report.passed());
    tr.check(&report.value, "0", report.value.is_zero());
    Ok(())
}

fn conormal(s: &mut Sampler, n: usize, tr: &mut Trial) -> Outcome {
    let chart = CotangentChart::standard(n);
    let t = chart.table().clone();
    let bits = s.rng().gen_range(0..(1u32 << n));
    let (gl, _) = s.gaussian_log(&t);
    let body = SuperFunction::coeff(&t, gl.body());
    let sigma = SDensity::new(rat(1, 2), DressedFunction::new(s.mixed_function(&t), body)?);
    let j: Vec<usize> = (0..n).filter(|i| bits & (1 << i) != 0).collect();
    tr.input("sigma", &sigma);
    tr.input("J", format!("{j:?}"));
    let (l, r) = conormal_sides(&chart, &sigma, &j)?;
    tr.eq(&l, &r);
    Ok(())
}
