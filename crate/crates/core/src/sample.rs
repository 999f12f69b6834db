//! Random exact inputs: rationals, points of polytopes, affine functions and
//! lattice polynomials. Used by the sampled checks and the test suites.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::affine::AffineFunc;
use crate::error::{Error, Result};
use crate::geometry::Polyhedron;
use crate::lattice::LatticePolynomial;
use crate::rational::{Point, Rational};

/// `p/q` with `|p| <= max_num` and `1 <= q <= max_den`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let p = rng.gen_range(-max_num..=max_num);
    let q = rng.gen_range(1..=max_den);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A rational on the grid `lo + (hi - lo) k / q`, `0 <= k <= q <= max_den`.
pub fn random_in_interval<R: Rng + ?Sized>(rng: &mut R, lo: &Rational, hi: &Rational, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let k = rng.gen_range(0..=q);
    lo + (hi - lo) * Rational::new(BigInt::from(k), BigInt::from(q))
}

/// Random points of a bounded polyhedron, boundary included. Box samples that
/// miss are pulled halfway toward an interior point until they land.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, p: &Polyhedron, count: usize) -> Result<Vec<Point>> {
    let bbox = p.bounding_box().ok_or(Error::UnboundedDomain)?;
    let center = p.interior_point().ok_or(Error::DegenerateDomain)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut x: Point = bbox.iter().map(|(lo, hi)| random_in_interval(rng, lo, hi, 24)).collect();
        while !p.contains(&x) {
            x = x.iter().zip(&center).map(|(a, c)| c + (a - c) * &half).collect();
        }
        out.push(x);
    }
    Ok(out)
}

pub fn random_affine<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_num: i64, max_den: i64) -> AffineFunc {
    AffineFunc::new(
        (0..dim).map(|_| random_rational(rng, max_num, max_den)).collect(),
        random_rational(rng, max_num, max_den),
    )
}

/// `n` distinct random components and between one and `n + 1` random
/// nonempty terms.
pub fn random_lattice<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n: usize,
    max_num: i64,
    max_den: i64,
) -> LatticePolynomial {
    let mut components: Vec<AffineFunc> = Vec::with_capacity(n);
    while components.len() < n {
        let g = random_affine(rng, dim, max_num, max_den);
        if !components.contains(&g) {
            components.push(g);
        }
    }
    let n_terms = rng.gen_range(1..=n + 1);
    let terms = (0..n_terms)
        .map(|_| loop {
            let t: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if !t.is_empty() {
                break t;
            }
        })
        .collect();
    LatticePolynomial::new(components, terms).expect("generated polynomial is well formed")
}

/// `[-r, r]^dim`.
pub fn centered_box(dim: usize, r: i64) -> Polyhedron {
    let r = Rational::from_integer(BigInt::from(r));
    Polyhedron::cube(dim, -r.clone(), r).expect("box is well formed")
}

pub fn is_zero_point(x: &[Rational]) -> bool {
    x.iter().all(Zero::is_zero)
}
