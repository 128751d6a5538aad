//! Exhaustive comparison of the engine against the naive oracle on every
//! monomial up to a total degree, in one to three pairs.

#![allow(dead_code)]

use std::sync::Arc;

use bvcalc_core::symplectic::{bv_bracket, standard_laplacian};
use bvcalc_core::{CoeffFn, Gen, GeneratorTable, Monomial, OddMonomial, Poly, Rat, SuperFunction};
use num::One;

use super::oracle::{self, Naive};

#[derive(Debug, Default)]
pub struct GridReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl GridReport {
    fn check(&mut self, what: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(format!("{what}: {}", detail()));
        }
    }
}

fn exponent_vectors(n: usize, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in 0..=max {
        for mut rest in exponent_vectors(n - 1, max - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Every `q^a p_I` with `|a| + |I| ≤ max_degree`, paired with its degree.
pub fn monomials(t: &Arc<GeneratorTable>, max_degree: u32) -> Vec<(u32, SuperFunction)> {
    let n = t.n_pairs();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let odd = OddMonomial::from_mask(mask);
        let k = odd.len() as u32;
        if k > max_degree {
            continue;
        }
        for e in exponent_vectors(n, max_degree - k) {
            let deg = k + e.iter().sum::<u32>();
            let c = CoeffFn::poly(Poly::term(Monomial::from_exponents(e), Rat::one()));
            out.push((deg, SuperFunction::term(t, odd, c)));
        }
    }
    out
}

pub fn run(max_pairs: usize, max_degree: u32) -> GridReport {
    let mut r = GridReport::default();
    for n in 1..=max_pairs {
        let t = GeneratorTable::darboux(n);
        let monos = monomials(&t, max_degree);
        let gens: Vec<Gen> = (0..n).flat_map(|i| [Gen::Even(i), Gen::Odd(i)]).collect();
        for (_, f) in &monos {
            let nf = Naive::from_sf(f);
            for &g in &gens {
                r.check("left_deriv", nf.deriv(g).agrees(&f.left_deriv(g)), || format!("{g:?} {f}"));
                r.check("right_deriv", nf.rderiv(g).agrees(&f.right_deriv(g)), || format!("{g:?} {f}"));
            }
            r.check("laplacian", oracle::laplacian(&nf).agrees(&standard_laplacian(f)), || f.to_string());
        }
        for (da, a) in &monos {
            let na = Naive::from_sf(a);
            let a_odd = na.parity_odd().unwrap_or(false);
            for (db, b) in &monos {
                if da + db > max_degree {
                    continue;
                }
                let nb = Naive::from_sf(b);
                r.check("mul", na.mul(&nb).agrees(&(a * b)), || format!("{a} * {b}"));
                let br = oracle::bracket(&na, a_odd, &nb);
                r.check("bracket", br.agrees(&bv_bracket(a, b)), || format!("({a}, {b})"));
            }
        }
    }
    r
}
