use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::affine::AffineFunc;
use crate::arrangement::{enumerate_regions, Sign};
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Polyhedron};
use crate::lp::{self, LinearConstraint};
use crate::pwl::{Piece, PwlFunction};
use crate::rational::{dot, Rational};

/// `x -> w2 . relu(w1 x + b1) + b2` with one hidden layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReluNet1 {
    pub w1: Vec<Vec<Rational>>,
    pub b1: Vec<Rational>,
    pub w2: Vec<Rational>,
    pub b2: Rational,
}

impl ReluNet1 {
    pub fn new(w1: Vec<Vec<Rational>>, b1: Vec<Rational>, w2: Vec<Rational>, b2: Rational) -> Result<Self> {
        let h = w1.len();
        if h == 0 {
            return Err(Error::Malformed("network needs at least one hidden unit".into()));
        }
        let d = w1[0].len();
        if d == 0 {
            return Err(Error::Malformed("network input dimension must be positive".into()));
        }
        if let Some(row) = w1.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: row.len() });
        }
        for v in [&b1, &w2] {
            if v.len() != h {
                return Err(Error::DimensionMismatch { expected: h, found: v.len() });
            }
        }
        Ok(ReluNet1 { w1, b1, w2, b2 })
    }

    pub fn input_dim(&self) -> usize {
        self.w1[0].len()
    }

    pub fn hidden(&self) -> usize {
        self.w1.len()
    }

    pub fn pre_activation(&self, unit: usize, x: &[Rational]) -> Rational {
        dot(&self.w1[unit], x) + &self.b1[unit]
    }

    pub fn forward(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: x.len() });
        }
        Ok((0..self.hidden()).fold(self.b2.clone(), |acc, i| {
            let z = self.pre_activation(i, x);
            if z.is_positive() {
                acc + &self.w2[i] * z
            } else {
                acc
            }
        }))
    }

    fn unit_func(&self, unit: usize) -> AffineFunc {
        AffineFunc::new(self.w1[unit].clone(), self.b1[unit].clone())
    }
}

/// Converts the network restricted to a bounded box into an exact PWL function:
/// one piece per activation region of the units with nonzero output weight.
pub fn import_relu(net: &ReluNet1, bbox: &Polyhedron) -> Result<PwlFunction> {
    if bbox.dim() != net.input_dim() {
        return Err(Error::DimensionMismatch { expected: net.input_dim(), found: bbox.dim() });
    }
    if bbox.interior_point().is_none() {
        return Err(Error::DegenerateDomain);
    }
    if !bbox.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let interior = bbox.interior_constraints();
    let mut seen = HashSet::new();
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    for unit in 0..net.hidden() {
        let g = net.unit_func(unit);
        // zero rows are constant units: no boundary
        if net.w2[unit].is_zero() || g.is_constant() {
            continue;
        }
        let h = Hyperplane::zero_set_of(&g)?;
        if !seen.insert((h.normal.clone(), h.offset.clone())) {
            continue;
        }
        let mut cons: Vec<LinearConstraint> = interior.clone();
        cons.push(h.equality());
        if lp::strict_point(bbox.dim(), &cons).is_some() {
            hyperplanes.push(h);
        }
    }
    let pieces = enumerate_regions(bbox, &hyperplanes)?
        .into_iter()
        .map(|(signs, w)| {
            let mut func = AffineFunc::constant(bbox.dim(), net.b2.clone());
            for unit in 0..net.hidden() {
                if net.pre_activation(unit, &w).is_positive() {
                    func = func.add(&net.unit_func(unit).scale(&net.w2[unit]));
                }
            }
            let mut halfspaces = bbox.halfspaces().to_vec();
            halfspaces.extend(hyperplanes.iter().zip(&signs).map(|(h, &s)| h.side_halfspace(s == Sign::Pos)));
            Ok(Piece { region: Polyhedron::new(bbox.dim(), halfspaces)?.irredundant(), func })
        })
        .collect::<Result<Vec<_>>>()?;
    PwlFunction::new(bbox.clone(), pieces)
}
