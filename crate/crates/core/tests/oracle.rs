mod common;

use bvcalc_core::sample::Sampler;
use bvcalc_core::symplectic::{bv_bracket, standard_laplacian};
use bvcalc_core::{GeneratorTable, Parity, Rat, SuperFunction};
use common::oracle::{self, Naive};
use num::One;

#[test]
fn exhaustive_grid_agrees() {
    let report = common::grid::run(3, 4);
    assert!(report.failures.is_empty(), "{:#?}", report.failures);
    assert!(report.checked > 1000);
}

#[test]
fn written_examples() {
    let t = GeneratorTable::darboux(2);
    let n = |names: &[&str]| SuperFunction::from_named_terms(&t, &[(Rat::one(), names.to_vec())]).unwrap();
    assert!(Naive::from_sf(&n(&["p1", "p2"])).agrees(&-n(&["p2", "p1"])));
    let mixed = n(&["q1", "p2", "q1", "p1"]);
    assert!(Naive::from_sf(&-n(&["q1", "q1", "p1", "p2"])).agrees(&mixed));
    let prod = &n(&["q1", "p1"]) * &n(&["q1", "p2"]);
    assert!(Naive::from_sf(&n(&["q1", "q1", "p1", "p2"])).agrees(&prod));
}

#[test]
fn random_sums_agree() {
    let mut s = Sampler::new(41);
    for n in 1..=3 {
        let t = GeneratorTable::darboux(n);
        for _ in 0..30 {
            let f = s.function(&t, Parity::Odd);
            let g = s.mixed_function(&t);
            let (nf, ng) = (Naive::from_sf(&f), Naive::from_sf(&g));
            assert!(nf.mul(&ng).agrees(&(&f * &g)));
            assert!(oracle::bracket(&nf, true, &ng).agrees(&bv_bracket(&f, &g)));
            assert!(oracle::laplacian(&ng).agrees(&standard_laplacian(&g)));
        }
    }
}
