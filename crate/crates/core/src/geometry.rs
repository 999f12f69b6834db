//! Halfspaces, H-polyhedra and hyperplanes, with every predicate reduced to
//! exact linear programming.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::affine::AffineFunc;
use crate::error::{Error, Result};
use crate::lp::{self, LinearConstraint, LpOutcome, Relation};
use crate::rational::{checked_div, dot, sign, Point, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strictness {
    Closed,
    Open,
}

/// `{x : normal . x <= bound}` (closed) or `{x : normal . x < bound}` (open).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub bound: Rational,
    pub strictness: Strictness,
}

impl Halfspace {
    pub fn closed(normal: Vec<Rational>, bound: Rational) -> Result<Self> {
        Self::with_strictness(normal, bound, Strictness::Closed)
    }

    pub fn open(normal: Vec<Rational>, bound: Rational) -> Result<Self> {
        Self::with_strictness(normal, bound, Strictness::Open)
    }

    fn with_strictness(normal: Vec<Rational>, bound: Rational, strictness: Strictness) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::ZeroNormal);
        }
        Ok(Halfspace { normal, bound, strictness })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.normal, x);
        match self.strictness {
            Strictness::Closed => lhs <= self.bound,
            Strictness::Open => lhs < self.bound,
        }
    }

    pub fn constraint(&self) -> LinearConstraint {
        let relation = match self.strictness {
            Strictness::Closed => Relation::Le,
            Strictness::Open => Relation::Lt,
        };
        LinearConstraint::new(self.normal.clone(), relation, self.bound.clone())
    }

    pub fn strict_constraint(&self) -> LinearConstraint {
        LinearConstraint::lt(self.normal.clone(), self.bound.clone())
    }

    /// The supporting hyperplane `normal . x = bound` as an equality.
    pub fn boundary_constraint(&self) -> LinearConstraint {
        LinearConstraint::eq(self.normal.clone(), self.bound.clone())
    }
}

/// A closed convex polyhedron `{x : normal_k . x <= bound_k for all k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl Polyhedron {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("polyhedron dimension must be positive".into()));
        }
        for h in &halfspaces {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
            if h.strictness != Strictness::Closed {
                return Err(Error::Malformed("polyhedron halfspaces must be closed".into()));
            }
        }
        Ok(Polyhedron { dim, halfspaces })
    }

    /// Builds from rows `(normal, bound)`.
    pub fn from_rows(dim: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        let halfspaces = rows.into_iter().map(|(n, b)| Halfspace::closed(n, b)).collect::<Result<Vec<_>>>()?;
        Polyhedron::new(dim, halfspaces)
    }

    /// The axis-aligned box `prod [lo_i, hi_i]`.
    pub fn boxed(bounds: &[(Rational, Rational)]) -> Result<Self> {
        let dim = bounds.len();
        let mut rows = Vec::with_capacity(2 * dim);
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            let mut up = vec![Rational::zero(); dim];
            up[i] = Rational::one();
            let down: Vec<Rational> = up.iter().map(|c| -c).collect();
            rows.push((up, hi.clone()));
            rows.push((down, -lo));
        }
        Polyhedron::from_rows(dim, rows)
    }

    pub fn cube(dim: usize, lo: Rational, hi: Rational) -> Result<Self> {
        Polyhedron::boxed(&vec![(lo, hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn strictly_contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|h| dot(&h.normal, x) < h.bound)
    }

    pub fn constraints(&self) -> Vec<LinearConstraint> {
        self.halfspaces.iter().map(Halfspace::constraint).collect()
    }

    /// Constraints describing the interior `{x : normal . x < bound}`.
    pub fn interior_constraints(&self) -> Vec<LinearConstraint> {
        self.halfspaces.iter().map(Halfspace::strict_constraint).collect()
    }

    pub fn with_halfspace(&self, h: Halfspace) -> Result<Self> {
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.push(h);
        Polyhedron::new(self.dim, halfspaces)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.extend(other.halfspaces.iter().cloned());
        Polyhedron::new(self.dim, halfspaces)
    }

    pub fn interior_point(&self) -> Option<Point> {
        interior_point(self)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.interior_point().is_some()
    }

    pub fn is_empty(&self) -> bool {
        !lp::is_feasible(self.dim, &self.constraints())
    }

    /// Per-coordinate `[min, max]`, or `None` when empty or unbounded.
    pub fn bounding_box(&self) -> Option<Vec<(Rational, Rational)>> {
        (0..self.dim)
            .map(|i| {
                let axis = AffineFunc::coordinate(self.dim, i);
                match functional_range_on(&axis, self) {
                    Ok(FunctionalRange { min: Some(lo), max: Some(hi) }) => Some((lo, hi)),
                    _ => None,
                }
            })
            .collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.bounding_box().is_some()
    }

    /// The same set with redundant halfspaces dropped, keeping the survivors in
    /// their original order. Empty polyhedra are returned unchanged.
    pub fn irredundant(&self) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        let mut keep: Vec<bool> = vec![true; self.halfspaces.len()];
        for k in 0..self.halfspaces.len() {
            let rest: Vec<LinearConstraint> = self
                .halfspaces
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k && keep[j])
                .map(|(_, h)| h.constraint())
                .collect();
            let h = &self.halfspaces[k];
            keep[k] = match lp::maximize(&h.normal, &rest) {
                LpOutcome::Optimal(s) => s.value > h.bound,
                _ => true,
            };
        }
        let halfspaces = self.halfspaces.iter().zip(&keep).filter(|(_, &k)| k).map(|(h, _)| h.clone()).collect();
        Polyhedron { dim: self.dim, halfspaces }
    }

    /// Whether `other` is a subset of `self` (checked halfspace by halfspace).
    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        let cons = other.constraints();
        self.halfspaces.iter().all(|h| match lp::maximize(&h.normal, &cons) {
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal(s) => s.value <= h.bound,
        })
    }
}

/// Maximizes an affine objective over a polyhedron; the reported value includes
/// the objective's offset.
pub fn lp_optimize(objective: &AffineFunc, constraints: &Polyhedron) -> Result<LpOutcome> {
    objective.check_dim(constraints.dim())?;
    Ok(match lp::maximize(&objective.coeffs, &constraints.constraints()) {
        LpOutcome::Optimal(mut s) => {
            s.value += &objective.offset;
            LpOutcome::Optimal(s)
        }
        other => other,
    })
}

/// A point satisfying every inequality of `p` strictly, if one exists.
pub fn interior_point(p: &Polyhedron) -> Option<Point> {
    lp::strict_point(p.dim(), &p.interior_constraints())
}

/// Exact infimum and supremum of an affine function; `None` means infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalRange {
    pub min: Option<Rational>,
    pub max: Option<Rational>,
}

impl FunctionalRange {
    pub fn vanishes(&self) -> bool {
        matches!((&self.min, &self.max), (Some(lo), Some(hi)) if lo.is_zero() && hi.is_zero())
    }
}

pub fn functional_range_on(g: &AffineFunc, p: &Polyhedron) -> Result<FunctionalRange> {
    g.check_dim(p.dim())?;
    functional_range_over(g, &p.constraints())
}

/// Like [`functional_range_on`] over an arbitrary constraint system.
pub fn functional_range_over(g: &AffineFunc, constraints: &[LinearConstraint]) -> Result<FunctionalRange> {
    let max = match lp::maximize(&g.coeffs, constraints) {
        LpOutcome::Infeasible => return Err(Error::EmptyPolyhedron),
        LpOutcome::Unbounded => None,
        LpOutcome::Optimal(s) => Some(s.value + &g.offset),
    };
    let min = match lp::minimize(&g.coeffs, constraints) {
        LpOutcome::Infeasible => return Err(Error::EmptyPolyhedron),
        LpOutcome::Unbounded => None,
        LpOutcome::Optimal(s) => Some(s.value + &g.offset),
    };
    Ok(FunctionalRange { min, max })
}

/// Whether `g` is identically zero on the (possibly empty) constraint set;
/// short-circuits after the first LP when possible.
pub fn vanishes_over(g: &AffineFunc, constraints: &[LinearConstraint]) -> bool {
    match lp::maximize(&g.coeffs, constraints) {
        LpOutcome::Infeasible => true,
        LpOutcome::Unbounded => false,
        LpOutcome::Optimal(s) if !(&s.value + &g.offset).is_zero() => false,
        LpOutcome::Optimal(_) => matches!(
            lp::minimize(&g.coeffs, constraints),
            LpOutcome::Optimal(s) if (&s.value + &g.offset).is_zero()
        ),
    }
}

/// The affine hyperplane `{x : normal . x = offset}` in canonical form: the
/// first nonzero coordinate of `normal` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    /// Component pairs `(i, j)`, `i < j`, whose equality set is this hyperplane.
    pub generators: BTreeSet<(usize, usize)>,
}

/// Canonicalizes `{x : a . x = b}`.
pub fn normalize_hyperplane(a: &[Rational], b: &Rational) -> Result<Hyperplane> {
    let lead = a.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroNormal)?;
    let normal = a.iter().map(|c| checked_div(c, lead)).collect::<Result<Vec<_>>>()?;
    let offset = checked_div(b, lead)?;
    Ok(Hyperplane { normal, offset, generators: BTreeSet::new() })
}

impl Hyperplane {
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Zero set of the affine function `g`; fails for constant `g`.
    pub fn zero_set_of(g: &AffineFunc) -> Result<Hyperplane> {
        normalize_hyperplane(&g.coeffs, &-&g.offset)
    }

    /// Sign of `normal . x - offset`.
    pub fn side(&self, x: &[Rational]) -> Ordering {
        sign(&(dot(&self.normal, x) - &self.offset))
    }

    pub fn same_set(&self, other: &Hyperplane) -> bool {
        self.normal == other.normal && self.offset == other.offset
    }

    /// `normal . x - offset` as an affine function.
    pub fn functional(&self) -> AffineFunc {
        AffineFunc::new(self.normal.clone(), -&self.offset)
    }

    /// The open (`strict`) or closed side of the hyperplane with the given sign.
    pub fn side_constraint(&self, positive: bool, strict: bool) -> LinearConstraint {
        let relation = if strict { Relation::Lt } else { Relation::Le };
        if positive {
            LinearConstraint::new(self.normal.iter().map(|c| -c).collect(), relation, -&self.offset)
        } else {
            LinearConstraint::new(self.normal.clone(), relation, self.offset.clone())
        }
    }

    pub fn side_halfspace(&self, positive: bool) -> Halfspace {
        let c = self.side_constraint(positive, false);
        Halfspace { normal: c.coeffs, bound: c.rhs, strictness: Strictness::Closed }
    }

    pub fn equality(&self) -> LinearConstraint {
        LinearConstraint::eq(self.normal.clone(), self.offset.clone())
    }
}
