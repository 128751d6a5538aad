//! Seeded random inputs and a catalogue of concrete chart maps for
//! property checks.

use std::sync::Arc;

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::CoeffFn;
use crate::dressed::DressedFunction;
use crate::error::{Error, Result};
use crate::integration::LagrangianGauge;
use crate::maps::{ChartMap, SuperMatrix};
use crate::poly::{rat, rat_int, Monomial, Poly, Rat};
use crate::superfn::{OddMonomial, SuperFunction};
use crate::symplectic::SuperVectorField;
use crate::table::{Gen, GeneratorTable, Parity};

/// Deterministic generator of random test data.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), max_degree: 3, max_terms: 4 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Small nonzero rational with numerator in `[-4, 4]` and denominator in `[1, 3]`.
    pub fn rational(&mut self) -> Rat {
        loop {
            let n: i64 = self.rng.gen_range(-4..=4);
            if n != 0 {
                return rat(n, self.rng.gen_range(1..=3));
            }
        }
    }

    /// Random polynomial in the given even generators.
    pub fn poly(&mut self, vars: &[usize], max_degree: u32) -> Poly {
        let mut p = Poly::zero();
        let k = self.rng.gen_range(1..=self.max_terms.min(3));
        for _ in 0..k {
            let mut exps = vec![0u32; vars.iter().max().map_or(0, |m| m + 1)];
            let deg = self.rng.gen_range(0..=max_degree);
            for _ in 0..deg {
                if let Some(&v) = vars.choose(&mut self.rng) {
                    exps[v] += 1;
                }
            }
            let c = self.rational();
            p.add_term(Monomial::from_exponents(exps), c);
        }
        p
    }

    fn even_vars(table: &GeneratorTable) -> Vec<usize> {
        (0..table.n_pairs()).collect()
    }

    /// Random homogeneous superfunction in the pair coordinates.
    pub fn function(&mut self, table: &Arc<GeneratorTable>, parity: Parity) -> SuperFunction {
        let n = table.n_pairs();
        let vars = Self::even_vars(table);
        let monos: Vec<OddMonomial> = (0u32..(1 << n))
            .map(OddMonomial::from_mask)
            .filter(|m| m.parity() == parity && m.len() <= 3)
            .collect();
        let mut out = SuperFunction::zero(table);
        if monos.is_empty() {
            return out;
        }
        let k = self.rng.gen_range(1..=self.max_terms);
        for _ in 0..k {
            let m = *monos.choose(&mut self.rng).expect("nonempty");
            let deg = self.max_degree.saturating_sub(m.len() as u32);
            let c = CoeffFn::poly(self.poly(&vars, deg));
            out.add_term(m, c);
        }
        out
    }

    /// Random function with both parity parts present (when possible).
    pub fn mixed_function(&mut self, table: &Arc<GeneratorTable>) -> SuperFunction {
        &self.function(table, Parity::Even) + &self.function(table, Parity::Odd)
    }

    /// Random even function with zero body.
    pub fn nilpotent_even(&mut self, table: &Arc<GeneratorTable>) -> SuperFunction {
        let f = self.function(table, Parity::Even);
        let body = SuperFunction::coeff(table, f.body());
        &f - &body
    }

    /// `-½ Σ a_i q_i²` with random positive `a_i`, plus a random nilpotent part.
    pub fn gaussian_log(&mut self, table: &Arc<GeneratorTable>) -> (SuperFunction, Vec<Rat>) {
        let mut s = SuperFunction::zero(table);
        let mut scales = Vec::new();
        for i in 0..table.n_pairs() {
            let a = rat_int(self.rng.gen_range(1..=3));
            let q = SuperFunction::gen(table, Gen::Even(i));
            s = &s + &(&q * &q).scale(&(-a.clone() / rat_int(2)));
            scales.push(a);
        }
        let nil = self.nilpotent_even(table);
        (&s + &nil, scales)
    }

    /// Random polynomial prefactor times a gaussian, ready for integration.
    pub fn gaussian_integrand(&mut self, table: &Arc<GeneratorTable>) -> (DressedFunction, Vec<Rat>) {
        let (s, scales) = self.gaussian_log(table);
        let f = self.mixed_function(table);
        (DressedFunction::new(f, s).expect("gaussian log is even"), scales)
    }

    /// Random homogeneous vector field.
    pub fn vector_field(&mut self, table: &Arc<GeneratorTable>, parity: Parity) -> SuperVectorField {
        let n = table.n_pairs();
        let up = (0..n).map(|_| self.function(table, parity)).collect();
        let down = (0..n).map(|_| self.function(table, parity.flip())).collect();
        SuperVectorField::new(table, up, down).expect("component counts match")
    }

    /// Random invertible rational matrix built from elementary operations.
    pub fn invertible_matrix(&mut self, n: usize) -> Vec<Vec<Rat>> {
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        for row in a.iter_mut() {
            let d = rat(self.rng.gen_range(1..=3), self.rng.gen_range(1..=2));
            for x in row.iter_mut() {
                *x *= d.clone();
            }
        }
        if n > 1 {
            for _ in 0..2 * n {
                let i = self.rng.gen_range(0..n);
                let j = (i + self.rng.gen_range(1..n)) % n;
                let c = rat_int(self.rng.gen_range(-2..=2));
                let row = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(row) {
                    *x += c.clone() * y;
                }
            }
        }
        a
    }

    /// Random even supermatrix on `n|n` blocks with invertible, upper
    /// triangular body in the diagonal blocks.
    pub fn supermatrix(&mut self, table: &Arc<GeneratorTable>) -> SuperMatrix {
        let n = table.n_pairs();
        let k = 2 * n;
        let mut entries = vec![vec![SuperFunction::zero(table); k]; k];
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = if (r < n) != (c < n) {
                    self.function(table, Parity::Odd)
                } else if r == c {
                    let d = rat(self.rng.gen_range(1..=3), self.rng.gen_range(1..=2));
                    &SuperFunction::constant(table, d) + &self.nilpotent_even(table)
                } else if r < c {
                    &SuperFunction::constant(table, self.rational()) + &self.nilpotent_even(table)
                } else {
                    self.nilpotent_even(table)
                };
            }
        }
        SuperMatrix::new(table, n, n, entries).expect("blocks have the right parity")
    }

    /// A random symplectomorphism followed by the fixed catalogue maps that
    /// live on `n` pairs. All have a positive constant Berezinian body.
    pub fn map_family(&mut self, n: usize) -> Result<Vec<ChartMap>> {
        let mut maps = vec![self.symplectomorphism(n)?];
        match n {
            1 => maps.push(fiber_scaling()?),
            2 => {
                maps.push(mixing_map()?);
                maps.push(nonlinear_lift(2)?);
            }
            3 => maps.push(odd_shift(3, &self.rational())?),
            _ => {}
        }
        Ok(maps)
    }

    /// Random odd gauge fermion `t·a(y) + b(y)` on a table with a parameter `t`.
    pub fn gauge_fermion(&mut self, table: &Arc<GeneratorTable>) -> SuperFunction {
        let trivial = LagrangianGauge::trivial(table);
        let mut y_part = || trivial.restrict(&self.function(table, Parity::Odd)).expect("same table").part(Parity::Odd);
        let (a, b) = (y_part(), y_part());
        let t = SuperFunction::gen(table, Gen::Even(table.param(0)));
        &(&t * &a) + &b
    }

    /// A random composite of the catalogue maps on `n` pairs.
    pub fn symplectomorphism(&mut self, n: usize) -> Result<ChartMap> {
        let a = self.invertible_matrix(n);
        let mut map = linear_lift(&a)?;
        if n >= 2 && self.rng.gen_bool(0.5) {
            map = nonlinear_lift(n)?.compose(&map)?;
        }
        if n >= 3 && self.rng.gen_bool(0.5) {
            map = odd_shift(n, &self.rational())?.compose(&map)?;
        }
        Ok(map)
    }
}

/// `x/y` table on `n` pairs with parameter `t`; bit `i` of `bits` makes `x_i` even.
pub fn pattern_table(n: usize, bits: u32) -> Arc<GeneratorTable> {
    let pattern: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
    GeneratorTable::builder(n).pattern(&pattern).params(&["t"]).xy_names(true).build().expect("valid pattern")
}

/// `-½ Σ y_i²` over the even `y` variables.
pub fn y_gaussian(table: &Arc<GeneratorTable>) -> SuperFunction {
    let mut g = SuperFunction::zero(table);
    for i in 0..table.n_pairs() {
        if table.flipped(i) {
            continue;
        }
        let y = SuperFunction::gen(table, table.y_gen(i));
        g = &g - &(&y * &y).scale(&rat(1, 2));
    }
    g
}

/// Gauss–Jordan inverse of a rational matrix.
pub fn matrix_inverse(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= inv.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f.clone() * y;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn linear_images(t: &Arc<GeneratorTable>, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> (Vec<SuperFunction>, Vec<SuperFunction>) {
    let n = a.len();
    let q = |j: usize| SuperFunction::gen(t, Gen::Even(j));
    let p = |j: usize| SuperFunction::gen(t, Gen::Odd(j));
    let even = (0..n)
        .map(|i| (0..n).fold(SuperFunction::zero(t), |acc, j| &acc + &q(j).scale(&a[i][j])))
        .collect();
    let odd = (0..n)
        .map(|i| (0..n).fold(SuperFunction::zero(t), |acc, j| &acc + &p(j).scale(&b[j][i])))
        .collect();
    (even, odd)
}

/// `q' = A q`, `p' = A^{-T} p`.
pub fn linear_lift(a: &[Vec<Rat>]) -> Result<ChartMap> {
    let t = GeneratorTable::darboux(a.len());
    let inv = matrix_inverse(a)?;
    let (e, o) = linear_images(&t, a, &inv);
    let (ie, io) = linear_images(&t, &inv, a);
    ChartMap::new(&t, &t, e, o)?.with_inverse(ChartMap::new(&t, &t, ie, io)?)
}

fn images(t: &Arc<GeneratorTable>, even: &[(usize, SuperFunction)], odd: &[(usize, SuperFunction)]) -> (Vec<SuperFunction>, Vec<SuperFunction>) {
    let n = t.n_pairs();
    let mut e: Vec<SuperFunction> = (0..n).map(|i| SuperFunction::gen(t, Gen::Even(i))).collect();
    let mut o: Vec<SuperFunction> = (0..n).map(|i| SuperFunction::gen(t, Gen::Odd(i))).collect();
    for (i, f) in even {
        e[*i] = f.clone();
    }
    for (i, f) in odd {
        o[*i] = f.clone();
    }
    (e, o)
}

/// `q1' = q1 + q2²`, `p2' = p2 - 2 q2 p1`, other coordinates fixed.
pub fn nonlinear_lift(n: usize) -> Result<ChartMap> {
    if n < 2 {
        return Err(Error::Dimension("the nonlinear lift needs two pairs".into()));
    }
    let t = GeneratorTable::darboux(n);
    let g = |x: Gen| SuperFunction::gen(&t, x);
    let (q1, q2, p1, p2) = (g(Gen::Even(0)), g(Gen::Even(1)), g(Gen::Odd(0)), g(Gen::Odd(1)));
    let sq = &q2 * &q2;
    let mix = (&q2 * &p1).scale(&rat_int(2));
    let (e, o) = images(&t, &[(0, &q1 + &sq)], &[(1, &p2 - &mix)]);
    let (ie, io) = images(&t, &[(0, &q1 - &sq)], &[(1, &p2 + &mix)]);
    ChartMap::new(&t, &t, e, o)?.with_inverse(ChartMap::new(&t, &t, ie, io)?)
}

/// `q^i' = q^i + ∂F/∂p_i` for `F = c p1 p2 p3`, `p' = p`.
pub fn odd_shift(n: usize, c: &Rat) -> Result<ChartMap> {
    if n < 3 {
        return Err(Error::Dimension("the odd shift needs three pairs".into()));
    }
    let t = GeneratorTable::darboux(n);
    let p = |i: usize| SuperFunction::gen(&t, Gen::Odd(i));
    let f = (&(&p(0) * &p(1)) * &p(2)).scale(c);
    let shift = |sign: i64| -> Vec<(usize, SuperFunction)> {
        (0..3)
            .map(|i| (i, &SuperFunction::gen(&t, Gen::Even(i)) + &f.left_deriv(Gen::Odd(i)).scale(&rat_int(sign))))
            .collect()
    };
    let (e, o) = images(&t, &shift(1), &[]);
    let (ie, io) = images(&t, &shift(-1), &[]);
    ChartMap::new(&t, &t, e, o)?.with_inverse(ChartMap::new(&t, &t, ie, io)?)
}

/// `q1' = q1 + p1 p2`, `p1' = p1 + q2 p2`. Invertible with mixed off-diagonal
/// Jacobian blocks, not symplectic.
pub fn mixing_map() -> Result<ChartMap> {
    let t = GeneratorTable::darboux(2);
    let g = |x: Gen| SuperFunction::gen(&t, x);
    let (q1, q2, p1, p2) = (g(Gen::Even(0)), g(Gen::Even(1)), g(Gen::Odd(0)), g(Gen::Odd(1)));
    let (e, o) = images(&t, &[(0, &q1 + &(&p1 * &p2))], &[(0, &p1 + &(&q2 * &p2))]);
    let (ie, io) = images(&t, &[(0, &q1 - &(&p1 * &p2))], &[(0, &p1 - &(&q2 * &p2))]);
    ChartMap::new(&t, &t, e, o)?.with_inverse(ChartMap::new(&t, &t, ie, io)?)
}

/// `q' = q`, `p' = 2p` on one pair: invertible but not symplectic.
pub fn fiber_scaling() -> Result<ChartMap> {
    let t = GeneratorTable::darboux(1);
    let q = SuperFunction::gen(&t, Gen::Even(0));
    let p = SuperFunction::gen(&t, Gen::Odd(0));
    ChartMap::new(&t, &t, vec![q.clone()], vec![p.scale(&rat_int(2))])?
        .with_inverse(ChartMap::new(&t, &t, vec![q], vec![p.scale(&rat(1, 2))])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::is_symplectomorphism;

    #[test]
    fn catalogue_maps_invert() {
        for m in [nonlinear_lift(2), odd_shift(3, &rat(2, 3)), mixing_map(), fiber_scaling()] {
            assert!(m.is_ok(), "{:?}", m.err());
        }
    }

    #[test]
    fn symplectic_flags() {
        assert!(is_symplectomorphism(&nonlinear_lift(2).unwrap()).unwrap());
        assert!(is_symplectomorphism(&odd_shift(3, &rat(1, 2)).unwrap()).unwrap());
        assert!(!is_symplectomorphism(&mixing_map().unwrap()).unwrap());
        assert!(!is_symplectomorphism(&fiber_scaling().unwrap()).unwrap());
        let mut s = Sampler::new(3);
        for n in 1..=3 {
            assert!(is_symplectomorphism(&s.symplectomorphism(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let t = GeneratorTable::darboux(2);
        let a = Sampler::new(11).function(&t, Parity::Odd);
        let b = Sampler::new(11).function(&t, Parity::Odd);
        assert_eq!(a, b);
        assert!(a.has_parity(Parity::Odd));
    }

    #[test]
    fn inverse_matrix() {
        let a = vec![vec![rat_int(2), rat_int(1)], vec![rat_int(1), rat_int(1)]];
        let b = matrix_inverse(&a).unwrap();
        assert_eq!(b, vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(2)]]);
        assert!(matrix_inverse(&[vec![Rat::zero()]]).is_err());
    }
}
