mod common;

use common::{cube, random_hyperplanes, rng};
use proptest::prelude::*;
use pwl_lattice::arrangement::{enumerate_cells, Arrangement, CellComplex, Sign};

fn complex(seed: u64, dim: usize, m: usize) -> CellComplex {
    let hs = random_hyperplanes(&mut rng(seed), dim, m);
    enumerate_cells(Arrangement::from_hyperplanes(&cube(dim, 2), &hs).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn metric_axioms_and_geodesics(seed in any::<u64>(), dim in 1usize..=3, m in 0usize..=6) {
        let c = complex(seed, dim, m);
        let n = c.len();
        for p in 0..n {
            prop_assert_eq!(c.distance(p, p).unwrap(), 0);
            for q in 0..n {
                let d = c.distance(p, q).unwrap();
                prop_assert_eq!(d, c.distance(q, p).unwrap());
                prop_assert_eq!(d == 0, p == q);
                let path = c.geodesic(p, q).unwrap();
                prop_assert_eq!(path.len(), d + 1);
                prop_assert_eq!(path[0], p);
                prop_assert_eq!(*path.last().unwrap(), q);
                for w in path.windows(2) {
                    prop_assert_eq!(c.distance(w[0], w[1]).unwrap(), 1);
                }
                for r in 0..n {
                    let (pr, rq) = (c.distance(p, r).unwrap(), c.distance(r, q).unwrap());
                    prop_assert!(d <= pr + rq);
                    let mut union = c.separation(p, r).unwrap().set;
                    union.extend(c.separation(r, q).unwrap().set);
                    union.sort_unstable();
                    union.dedup();
                    prop_assert_eq!(d == pr + rq, union == c.separation(p, q).unwrap().set);
                }
            }
        }
    }

    #[test]
    fn unit_distance_means_shared_facet(seed in any::<u64>(), dim in 1usize..=3, m in 0usize..=6) {
        let c = complex(seed, dim, m);
        for p in 0..c.len() {
            for q in 0..c.len() {
                let adjacent = c.common_facet_witness(p, q).unwrap().is_some();
                prop_assert_eq!(adjacent, c.distance(p, q).unwrap() == 1);
            }
        }
    }

    #[test]
    fn enumeration_is_exhaustive(seed in any::<u64>(), dim in 1usize..=3, m in 0usize..=5) {
        let c = complex(seed, dim, m);
        let k = c.hyperplanes().len();
        let mut feasible = 0;
        for bits in 0u32..(1 << k) {
            let signs: Vec<Sign> =
                (0..k).map(|i| if bits >> i & 1 == 1 { Sign::Pos } else { Sign::Neg }).collect();
            if c.is_sign_vector_feasible(&signs) {
                feasible += 1;
                prop_assert!(c.find(&signs).is_some());
            } else {
                prop_assert!(c.find(&signs).is_none());
            }
        }
        prop_assert_eq!(feasible, c.len());
        for cell in &c.cells {
            for (h, &s) in c.hyperplanes().iter().zip(&cell.signs) {
                let expected = if s == Sign::Pos { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
                prop_assert_eq!(h.side(&cell.witness), expected);
            }
            prop_assert!(c.arrangement.domain.strictly_contains(&cell.witness));
        }
        let mut sorted = c.cells.iter().map(|x| x.signs.clone()).collect::<Vec<_>>();
        sorted.sort();
        prop_assert_eq!(sorted, c.cells.iter().map(|x| x.signs.clone()).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compact_cell_closures_describe_the_same_set(seed in any::<u64>(), dim in 1usize..=3, m in 0usize..=6) {
        let c = complex(seed, dim, m);
        for cell in &c.cells {
            let full = c.cell_polyhedron(cell.id).unwrap();
            let compact = c.cell_closure(cell.id).unwrap();
            prop_assert!(full.contains_polyhedron(&compact) && compact.contains_polyhedron(&full));
            prop_assert!(compact.halfspaces().len() <= full.halfspaces().len());
        }
    }
}
