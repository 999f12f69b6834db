#![allow(dead_code)]

use pwl_lattice::geometry::Hyperplane;
use pwl_lattice::rational::{int, Rational};
use pwl_lattice::sample::{random_affine, random_lattice, random_rational};
use pwl_lattice::{lattice_to_pwl, AffineFunc, LatticePolynomial, Polyhedron, PwlFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cube(dim: usize, r: i64) -> Polyhedron {
    Polyhedron::cube(dim, int(-r), int(r)).unwrap()
}

pub fn lin(coeffs: &[i64], offset: i64) -> AffineFunc {
    AffineFunc::new(coeffs.iter().map(|&c| int(c)).collect(), int(offset))
}

/// A random lattice polynomial in dimension 1..=3 with 1..=4 components and its
/// compiled PWL function on `[-10, 10]^d`.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (LatticePolynomial, PwlFunction) {
    let dim = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=4);
    let p = random_lattice(rng, dim, n, 10, 10);
    let f = lattice_to_pwl(&p, &cube(dim, 10)).unwrap();
    (p, f)
}

/// Up to `m` random hyperplanes through points of `[-2, 2]^dim`.
pub fn random_hyperplanes(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Vec<Hyperplane> {
    (0..m)
        .filter_map(|_| {
            let g = random_affine(rng, dim, 5, 3);
            let g = AffineFunc::new(g.coeffs, random_rational(rng, 2, 3));
            Hyperplane::zero_set_of(&g).ok()
        })
        .collect()
}

pub fn grid_1d(lo: i64, hi: i64, den: i64) -> Vec<Rational> {
    (lo * den..=hi * den).map(|k| Rational::new(k.into(), den.into())).collect()
}
