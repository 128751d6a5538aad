use bvcalc_core::sample::Sampler;
use bvcalc_core::{rat, DressedFunction, Gen, GeneratorTable, Parity, Rat, Substitution, SuperFunction};
use num::One;
use proptest::prelude::*;

fn named(t: &std::sync::Arc<GeneratorTable>, s: &str) -> SuperFunction {
    SuperFunction::named(t, s).unwrap()
}

fn gens(n: usize) -> Vec<Gen> {
    (0..n).flat_map(|i| [Gen::Even(i), Gen::Odd(i)]).collect()
}

fn koszul(a: Parity, b: Parity) -> Rat {
    Rat::from_integer(a.koszul(b).into())
}

#[test]
fn normalize_examples() {
    let t = GeneratorTable::darboux(2);
    let raw = |names: &[&str]| SuperFunction::from_named_terms(&t, &[(Rat::one(), names.to_vec())]).unwrap();
    assert_eq!(raw(&["p2", "p1"]), -raw(&["p1", "p2"]));
    assert!(raw(&["p1", "p1"]).is_zero());
    assert_eq!(raw(&["q1", "p2", "q1", "p1"]).to_string(), "-q1^2*p1*p2");
    assert!(SuperFunction::from_named_terms(&t, &[(Rat::one(), vec!["z9"])]).is_err());
}

#[test]
fn product_and_derivative_examples() {
    let t = GeneratorTable::darboux(2);
    let (q1, p1, p2) = (named(&t, "q1"), named(&t, "p1"), named(&t, "p2"));
    assert_eq!((&p1 * &p2).to_string(), "p1*p2");
    assert!((&(&p1 * &p2) * &p1).is_zero());
    assert_eq!((&(&q1 * &p1) * &(&q1 * &p2)).to_string(), "q1^2*p1*p2");
    let p12 = &p1 * &p2;
    assert_eq!(p12.left_deriv(Gen::Odd(0)), p2);
    assert_eq!(p12.left_deriv(Gen::Odd(1)), -p1.clone());
    assert!(q1.left_deriv(Gen::Odd(0)).is_zero());
    assert!(GeneratorTable::darboux(1).lookup("p2").is_none());
}

#[test]
fn right_derivative_examples() {
    let t = GeneratorTable::darboux(1);
    let (q, p) = (named(&t, "q1"), named(&t, "p1"));
    assert_eq!(p.right_deriv(Gen::Odd(0)), SuperFunction::one(&t));
    assert_eq!(q.right_deriv(Gen::Even(0)), SuperFunction::one(&t));
    assert_eq!((&q * &p).right_deriv(Gen::Odd(0)), q);
}

fn mixed_table() -> std::sync::Arc<GeneratorTable> {
    GeneratorTable::builder(2).pattern(&[false, true]).params(&["t"]).xy_names(true).build().unwrap()
}

#[test]
fn substitution_examples() {
    let t = mixed_table();
    let v = |s: &str| named(&t, s);
    let zero = Substitution::identity(&t).set(t.lookup("x1").unwrap(), SuperFunction::zero(&t)).unwrap();
    assert!((&v("x1") * &v("y1")).substitute(&zero).unwrap().is_zero());
    let s = Substitution::identity(&t).set(t.lookup("x1").unwrap(), -(&v("t") * &v("y2"))).unwrap();
    assert!((&v("x1") * &v("y2")).substitute(&s).unwrap().is_zero());
    let s2 = Substitution::identity(&t).set(t.lookup("x2").unwrap(), &v("t") * &v("y1")).unwrap();
    assert_eq!(v("x2").substitute(&s2).unwrap(), &v("t") * &v("y1"));
    assert!(Substitution::identity(&t).set(t.lookup("x2").unwrap(), v("y2")).is_err());
}

#[test]
fn dressed_derivative_examples() {
    let t = GeneratorTable::darboux(2);
    let (q1, p1, p2) = (named(&t, "q1"), named(&t, "p1"), named(&t, "p2"));
    let s0 = (&q1 * &q1).scale(&rat(-1, 2));
    let g = DressedFunction::exp(s0.clone()).unwrap();
    assert_eq!(g.left_deriv(Gen::Even(0)).base(), &-q1.clone());
    assert!(g.left_deriv(Gen::Odd(0)).is_zero());
    let h = DressedFunction::new(p1.clone(), &(&p1 * &p2).scale(&Rat::from_integer(0.into())) + &s0).unwrap();
    let d = h.left_deriv(Gen::Odd(0));
    assert_eq!(d.base(), &SuperFunction::one(&t));
    assert_eq!(d.exponent(), &s0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn supercommutative(seed in any::<u64>(), n in 1usize..=3, pf in any::<bool>(), pg in any::<bool>()) {
        let t = GeneratorTable::darboux(n);
        let mut s = Sampler::new(seed);
        let par = |b| if b { Parity::Odd } else { Parity::Even };
        let f = s.function(&t, par(pf));
        let g = s.function(&t, par(pg));
        prop_assert_eq!(&f * &g, (&g * &f).scale(&koszul(par(pf), par(pg))));
    }

    #[test]
    fn associative_and_distributive(seed in any::<u64>(), n in 1usize..=3) {
        let t = GeneratorTable::darboux(n);
        let mut s = Sampler::new(seed);
        let (f, g, h) = (s.mixed_function(&t), s.mixed_function(&t), s.mixed_function(&t));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn derivatives_graded_commute(seed in any::<u64>(), n in 1usize..=3) {
        let t = GeneratorTable::darboux(n);
        let mut s = Sampler::new(seed);
        let f = s.mixed_function(&t);
        for a in gens(n) {
            for b in gens(n) {
                let ab = f.left_deriv(b).left_deriv(a);
                let ba = f.left_deriv(a).left_deriv(b).scale(&koszul(a.parity(), b.parity()));
                prop_assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), n in 1usize..=3, pf in any::<bool>()) {
        let t = GeneratorTable::darboux(n);
        let mut s = Sampler::new(seed);
        let par = if pf { Parity::Odd } else { Parity::Even };
        let f = s.function(&t, par);
        let g = s.mixed_function(&t);
        for d in gens(n) {
            let lhs = (&f * &g).left_deriv(d);
            let rhs = &(&f.left_deriv(d) * &g) + &(&f * &g.left_deriv(d)).scale(&koszul(d.parity(), par));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn right_derivative_table(seed in any::<u64>(), n in 1usize..=3, pf in any::<bool>()) {
        let t = GeneratorTable::darboux(n);
        let par = if pf { Parity::Odd } else { Parity::Even };
        let f = Sampler::new(seed).function(&t, par);
        let sign = -Rat::from_integer(par.sign().into());
        for i in 0..n {
            prop_assert_eq!(f.right_deriv(Gen::Even(i)), f.left_deriv(Gen::Even(i)));
            prop_assert_eq!(f.right_deriv(Gen::Odd(i)), f.left_deriv(Gen::Odd(i)).scale(&sign));
        }
    }

    #[test]
    fn normalize_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let t = GeneratorTable::darboux(n);
        let f = Sampler::new(seed).mixed_function(&t);
        let again = f.substitute(&Substitution::identity(&t)).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(&f + &SuperFunction::zero(&t), f);
    }
}
