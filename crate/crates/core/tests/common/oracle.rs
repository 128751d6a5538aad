//! Naive reference arithmetic: a function is a list of words in the
//! generators, kept in written order. Products concatenate words, derivatives
//! walk each word and pick up a sign for every odd generator passed. Only the
//! final comparison sorts, with its own bubble sort.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use bvcalc_core::{Gen, GeneratorTable, Rat, SuperFunction};
use num::{One, Zero};

pub type Word = Vec<Gen>;

#[derive(Clone, Debug)]
pub struct Naive {
    pub table: Arc<GeneratorTable>,
    pub terms: Vec<(Rat, Word)>,
}

type Canon = BTreeMap<(Vec<u32>, Vec<usize>), Rat>;

fn odd_count(w: &[Gen]) -> usize {
    w.iter().filter(|g| matches!(g, Gen::Odd(_))).count()
}

impl Naive {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        Naive { table: table.clone(), terms: Vec::new() }
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: Rat) -> Self {
        Naive { table: table.clone(), terms: vec![(c, Vec::new())] }
    }

    pub fn gen(table: &Arc<GeneratorTable>, g: Gen) -> Self {
        Naive { table: table.clone(), terms: vec![(Rat::one(), vec![g])] }
    }

    /// Read a polynomial superfunction back as words.
    pub fn from_sf(f: &SuperFunction) -> Self {
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            assert!(c.denom().is_one(), "oracle handles polynomial coefficients only");
            for (mono, r) in c.numer().terms() {
                let mut w: Word = Vec::new();
                for (v, &e) in mono.exponents().iter().enumerate() {
                    w.extend(std::iter::repeat_n(Gen::Even(v), e as usize));
                }
                w.extend(m.indices().map(Gen::Odd));
                terms.push((r.clone(), w));
            }
        }
        Naive { table: f.table().clone(), terms }
    }

    pub fn add(&self, o: &Naive) -> Naive {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Naive { table: self.table.clone(), terms }
    }

    pub fn scale(&self, c: &Rat) -> Naive {
        let terms = self.terms.iter().map(|(r, w)| (r * c, w.clone())).collect();
        Naive { table: self.table.clone(), terms }
    }

    pub fn sub(&self, o: &Naive) -> Naive {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn mul(&self, o: &Naive) -> Naive {
        let mut terms = Vec::new();
        for (a, u) in &self.terms {
            for (b, v) in &o.terms {
                let mut w = u.clone();
                w.extend(v.iter().copied());
                terms.push((a * b, w));
            }
        }
        Naive { table: self.table.clone(), terms }
    }

    /// Left derivative: remove one occurrence at a time, with sign
    /// `(-1)^{(#odd letters before it)·|g|}`.
    pub fn deriv(&self, g: Gen) -> Naive {
        self.strip(g, false)
    }

    /// Right derivative: same walk, counting odd letters after the occurrence.
    pub fn rderiv(&self, g: Gen) -> Naive {
        self.strip(g, true)
    }

    fn strip(&self, g: Gen, from_right: bool) -> Naive {
        let g_odd = matches!(g, Gen::Odd(_));
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            for k in 0..w.len() {
                if w[k] != g {
                    continue;
                }
                let passed = if from_right { odd_count(&w[k + 1..]) } else { odd_count(&w[..k]) };
                let flips = if g_odd { passed } else { 0 };
                let sign = if flips % 2 == 1 { -Rat::one() } else { Rat::one() };
                let mut rest = w.clone();
                rest.remove(k);
                terms.push((c * &sign, rest));
            }
        }
        Naive { table: self.table.clone(), terms }
    }

    /// Parity of the first surviving term.
    pub fn parity_odd(&self) -> Option<bool> {
        self.canon().keys().next().map(|(_, p)| p.len() % 2 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.canon().is_empty()
    }

    pub fn canon(&self) -> Canon {
        let mut out: Canon = BTreeMap::new();
        let n_even = self.table.n_even();
        for (c, w) in &self.terms {
            let mut exps = vec![0u32; n_even];
            let mut odd: Vec<usize> = Vec::new();
            for g in w {
                match *g {
                    Gen::Even(i) => exps[i] += 1,
                    Gen::Odd(i) => odd.push(i),
                }
            }
            let mut swaps = 0usize;
            for i in 0..odd.len() {
                for j in 0..odd.len() - 1 - i {
                    if odd[j] > odd[j + 1] {
                        odd.swap(j, j + 1);
                        swaps += 1;
                    }
                }
            }
            if odd.windows(2).any(|p| p[0] == p[1]) {
                continue;
            }
            while exps.last() == Some(&0) {
                exps.pop();
            }
            let c = if swaps % 2 == 1 { -c.clone() } else { c.clone() };
            let e = out.entry((exps, odd)).or_insert_with(Rat::zero);
            *e += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn agrees(&self, f: &SuperFunction) -> bool {
        self.canon() == Naive::from_sf(f).canon()
    }
}

/// `(f, g) = (-1)^{|f|+1} ∂^i f ∂_i g - ∂_i f ∂^i g` for homogeneous `f`.
pub fn bracket(f: &Naive, f_odd: bool, g: &Naive) -> Naive {
    let sign = if f_odd { Rat::one() } else { -Rat::one() };
    let mut out = Naive::zero(&f.table);
    for i in 0..f.table.n_pairs() {
        let a = f.deriv(Gen::Odd(i)).mul(&g.deriv(Gen::Even(i))).scale(&sign);
        let b = f.deriv(Gen::Even(i)).mul(&g.deriv(Gen::Odd(i)));
        out = out.add(&a).sub(&b);
    }
    out
}

pub fn laplacian(f: &Naive) -> Naive {
    let mut out = Naive::zero(&f.table);
    for i in 0..f.table.n_pairs() {
        out = out.add(&f.deriv(Gen::Odd(i)).deriv(Gen::Even(i)));
    }
    out
}

/// `∫ dθ_1 … dθ_k`, innermost first.
pub fn berezin(f: &Naive, odd: &[usize]) -> Naive {
    odd.iter().rev().fold(f.clone(), |acc, &v| acc.deriv(Gen::Odd(v)))
}

/// `∫ y^m e^{-a y²/2} dy / G(a)` by integration by parts.
pub fn gaussian_moment(m: u32, a: &Rat) -> Rat {
    match m {
        0 => Rat::one(),
        1 => Rat::zero(),
        _ => Rat::from_integer((m as i64 - 1).into()) / a * gaussian_moment(m - 2, a),
    }
}

