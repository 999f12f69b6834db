mod common;

use common::{random_instance, rng};
use proptest::prelude::*;
use pwl_lattice::latticizer::{analyze, verify_symbolic, WitnessStrategy};
use pwl_lattice::rational::Rational;
use pwl_lattice::sample::random_points;
use pwl_lattice::{lattice_to_pwl, simplify};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compiled_polynomials_are_valid_and_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, f) = random_instance(&mut r);
        prop_assert!(f.validate().is_valid(), "{}", f.validate());
        let rep = analyze(&f).unwrap();
        let q = &rep.polynomial;
        prop_assert!(q.is_simplified());
        prop_assert!(verify_symbolic(&f, q).unwrap().passed());
        prop_assert!(verify_symbolic(&f, &rep.unsimplified()).unwrap().passed());
        for x in random_points(&mut r, f.domain(), 50).unwrap() {
            let v = f.eval(&x).unwrap();
            prop_assert_eq!(&p.evaluate(&x).unwrap(), &v);
            prop_assert_eq!(&q.evaluate(&x).unwrap(), &v);
        }
        // recompiling the representation reproduces the same function
        let g = lattice_to_pwl(q, f.domain()).unwrap();
        for x in random_points(&mut r, f.domain(), 20).unwrap() {
            prop_assert_eq!(g.eval(&x).unwrap(), f.eval(&x).unwrap());
        }
    }

    #[test]
    fn per_cell_structure(seed in any::<u64>()) {
        let (_, f) = random_instance(&mut rng(seed));
        let rep = analyze(&f).unwrap();
        let comps = rep.polynomial.components();
        for cell in &rep.complex.cells {
            let order = &rep.orders[cell.id];
            // the order at the witness is strict and linear
            let values: Vec<Rational> = order.order.iter().map(|&i| comps[i].eval(&cell.witness)).collect();
            prop_assert!(values.windows(2).all(|w| w[0] < w[1]));
            let n = rep.dominants[cell.id];
            prop_assert_eq!(comps[n].eval(&cell.witness), f.eval(&cell.witness).unwrap());
            let term = &rep.raw_terms[cell.id];
            prop_assert!(term.contains(&n));
            prop_assert_eq!(order.reduce_term(term), n);
            // every raw term is below f on this cell, and the own term attains it
            for t in &rep.raw_terms {
                prop_assert!(order.le(order.reduce_term(t), n));
            }
        }
    }

    #[test]
    fn witnesses_exist_for_all_pairs(seed in any::<u64>()) {
        let (_, f) = random_instance(&mut rng(seed));
        let rep = analyze(&f).unwrap();
        for p in 0..rep.complex.len() {
            for q in 0..rep.complex.len() {
                for s in [WitnessStrategy::Brute, WitnessStrategy::Inductive] {
                    let k = rep.lemma_witness(p, q, s).unwrap();
                    prop_assert!(rep.below_on(p, k) && rep.above_on(q, k));
                }
            }
        }
    }

    #[test]
    fn simplification_preserves_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, f) = random_instance(&mut r);
        let s = simplify(&p);
        prop_assert!(s.is_simplified());
        prop_assert_eq!(simplify(&s), s.clone());
        for x in random_points(&mut r, f.domain(), 30).unwrap() {
            prop_assert_eq!(s.evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn extra_terms_only_increase(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, f) = random_instance(&mut r);
        let n = p.components().len();
        let mut terms = p.terms().to_vec();
        terms.push((0..n).collect());
        terms.push(vec![n - 1]);
        let bigger = pwl_lattice::LatticePolynomial::new(p.components().to_vec(), terms).unwrap();
        for x in random_points(&mut r, f.domain(), 20).unwrap() {
            prop_assert!(bigger.evaluate(&x).unwrap() >= p.evaluate(&x).unwrap());
        }
    }
}
