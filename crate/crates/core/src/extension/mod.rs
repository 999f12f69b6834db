//! Extending PWL data beyond where it is given: radially from polytope
//! boundary data, and from a domain to a larger box.

mod relu;

pub use relu::{import_relu, ReluNet1};

use num_traits::{Signed, Zero};

use crate::affine::AffineFunc;
use crate::error::{Error, Result};
use crate::geometry::{vanishes_over, Halfspace, Polyhedron};
use crate::latticizer::{build_representation, lattice_to_pwl};
use crate::lp::{self, LinearConstraint};
use crate::pwl::{Piece, PwlFunction};
use crate::rational::{dot, Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetData {
    /// Index into the polytope's halfspaces.
    pub facet: usize,
    /// Affine function agreeing with the boundary data on that facet.
    pub func: AffineFunc,
}

/// PWL data on the boundary of a bounded polytope, one affine function per
/// facet, together with a strictly interior center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPwl {
    pub polytope: Polyhedron,
    pub center: Point,
    pub facet_data: Vec<FacetData>,
}

fn same_halfspace(a: &Halfspace, b: &Halfspace) -> bool {
    // positive multiples describe the same halfspace
    let Some(k) = a.normal.iter().position(|c| !c.is_zero()) else { return false };
    if b.normal[k].is_zero() || b.normal[k].is_negative() != a.normal[k].is_negative() {
        return false;
    }
    let scale = &b.normal[k] / &a.normal[k];
    a.normal.iter().zip(&b.normal).all(|(x, y)| x * &scale == *y) && &a.bound * &scale == b.bound
}

/// Whether halfspace `k` of `p` meets `p` in a (d-1)-dimensional face.
fn is_facet(p: &Polyhedron, k: usize) -> bool {
    let hs = p.halfspaces();
    if hs[..k].iter().any(|h| same_halfspace(h, &hs[k])) {
        return false;
    }
    let mut cons = vec![hs[k].boundary_constraint()];
    cons.extend(
        hs.iter()
            .enumerate()
            .filter(|&(j, h)| j != k && !same_halfspace(h, &hs[k]))
            .map(|(_, h)| h.strict_constraint()),
    );
    lp::strict_point(p.dim(), &cons).is_some()
}

impl BoundaryPwl {
    pub fn validate(&self) -> Result<()> {
        let p = &self.polytope;
        if self.center.len() != p.dim() {
            return Err(Error::DimensionMismatch { expected: p.dim(), found: self.center.len() });
        }
        if p.interior_point().is_none() {
            return Err(Error::DegenerateDomain);
        }
        if !p.is_bounded() {
            return Err(Error::UnboundedDomain);
        }
        if !p.strictly_contains(&self.center) {
            return Err(Error::CenterNotInterior);
        }
        let bad = |msg: String| Err(Error::InconsistentBoundaryData(msg));
        let n = p.halfspaces().len();
        let mut has_data = vec![false; n];
        for fd in &self.facet_data {
            fd.func.check_dim(p.dim())?;
            if fd.facet >= n {
                return bad(format!("facet index {} out of range", fd.facet));
            }
            if std::mem::replace(&mut has_data[fd.facet], true) {
                return bad(format!("facet {} has more than one function", fd.facet));
            }
        }
        for (k, &given) in has_data.iter().enumerate() {
            match (is_facet(p, k), given) {
                (true, false) => return bad(format!("facet {k} has no data")),
                (false, true) => return bad(format!("halfspace {k} is not a facet")),
                _ => {}
            }
        }
        for (i, a) in self.facet_data.iter().enumerate() {
            for b in &self.facet_data[i + 1..] {
                let hs = p.halfspaces();
                let mut cons = p.constraints();
                cons.push(hs[a.facet].boundary_constraint());
                cons.push(hs[b.facet].boundary_constraint());
                if !vanishes_over(&(&a.func - &b.func), &cons) {
                    return bad(format!("facets {} and {} disagree where they meet", a.facet, b.facet));
                }
            }
        }
        Ok(())
    }
}

/// The degree-one homogeneous extension about the center: on the cone from
/// the center over facet F it is the affine function vanishing at the center
/// and equal to the facet data on F's supporting hyperplane.
pub fn radial_extend(b: &BoundaryPwl) -> Result<PwlFunction> {
    b.validate()?;
    let p = &b.polytope;
    let a = &b.center;
    // Gauge contribution of facet k: lambda_k(x) = n_k.(x - a) / (beta_k - n_k.a),
    // equal to 1 on the facet's hyperplane and 0 at the center.
    let gauge: Vec<AffineFunc> = b
        .facet_data
        .iter()
        .map(|fd| {
            let h = &p.halfspaces()[fd.facet];
            let depth = &h.bound - dot(&h.normal, a);
            let coeffs: Vec<Rational> = h.normal.iter().map(|c| c / &depth).collect();
            let offset = -dot(&coeffs, a);
            AffineFunc::new(coeffs, offset)
        })
        .collect();
    let pieces = b
        .facet_data
        .iter()
        .enumerate()
        .map(|(k, fd)| {
            let mut halfspaces = p.halfspaces().to_vec();
            for (j, other) in gauge.iter().enumerate() {
                if j != k {
                    let diff = other - &gauge[k];
                    halfspaces.push(Halfspace::closed(diff.coeffs, -diff.offset)?);
                }
            }
            // lambda_k(x) * g(a) + c.(x - a)
            let at_center = fd.func.eval(a);
            let linear = AffineFunc::new(fd.func.coeffs.clone(), -dot(&fd.func.coeffs, a));
            let func = gauge[k].scale(&at_center).add(&linear);
            Ok(Piece { region: Polyhedron::new(p.dim(), halfspaces)?.irredundant(), func })
        })
        .collect::<Result<Vec<_>>>()?;
    PwlFunction::new(p.clone(), pieces)
}

/// Extends a valid PWL function from its domain to a bounded target containing
/// it, through its max-min representation (which is defined on all of R^d).
pub fn extend_to_space(f: &PwlFunction, target: &Polyhedron) -> Result<PwlFunction> {
    if target.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: target.dim() });
    }
    if !target.contains_polyhedron(f.domain()) {
        return Err(Error::TargetDoesNotContainDomain);
    }
    let p = build_representation(f)?;
    lattice_to_pwl(&p, target)
}

/// A point in the relative interior of facet `k` of the polytope.
pub fn facet_interior_point(p: &Polyhedron, k: usize) -> Option<Point> {
    let hs = p.halfspaces();
    let mut cons: Vec<LinearConstraint> = vec![hs.get(k)?.boundary_constraint()];
    cons.extend(
        hs.iter()
            .enumerate()
            .filter(|&(j, h)| j != k && !same_halfspace(h, &hs[k]))
            .map(|(_, h)| h.strict_constraint()),
    );
    lp::strict_point(p.dim(), &cons)
}
