//! Piecewise linear functions given as finite covers of a convex polyhedral
//! domain by closed polyhedral pieces, each carrying an affine function.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::affine::AffineFunc;
use crate::arrangement::enumerate_regions;
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Polyhedron};
use crate::lp::{self, LinearConstraint, LpOutcome};
use crate::rational::{Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub region: Polyhedron,
    pub func: AffineFunc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwlFunction {
    domain: Polyhedron,
    pieces: Vec<Piece>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    DegenerateDomain,
    PieceOutsideDomain,
    OverlapMismatch,
    CoverGap,
    ContinuityBreak,
}

impl ViolationKind {
    pub fn code(self) -> &'static str {
        match self {
            ViolationKind::DegenerateDomain => "DEGENERATE_DOMAIN",
            ViolationKind::PieceOutsideDomain => "PIECE_OUTSIDE_DOMAIN",
            ViolationKind::OverlapMismatch => "OVERLAP_MISMATCH",
            ViolationKind::CoverGap => "COVER_GAP",
            ViolationKind::ContinuityBreak => "CONTINUITY_BREAK",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending piece indices (empty for domain-level violations).
    pub pieces: Vec<usize>,
    /// A point exhibiting the problem, when one is available.
    pub witness: Option<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| {
                let mut s = v.kind.code().to_string();
                if !v.pieces.is_empty() {
                    s += &format!(" pieces {:?}", v.pieces);
                }
                if let Some(w) = &v.witness {
                    s += &format!(" at ({})", crate::rational::format_point(w));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// The distinct affine components of a PWL function and which piece uses which.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSet {
    pub components: Vec<AffineFunc>,
    pub piece_to_component: Vec<usize>,
}

impl ComponentSet {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, g: &AffineFunc) -> Option<usize> {
        self.components.iter().position(|c| c == g)
    }
}

impl PwlFunction {
    /// Checks dimensions only; use [`PwlFunction::validate`] for the full
    /// well-formedness conditions.
    pub fn new(domain: Polyhedron, pieces: Vec<Piece>) -> Result<Self> {
        let d = domain.dim();
        for p in &pieces {
            if p.region.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.region.dim() });
            }
            p.func.check_dim(d)?;
        }
        Ok(PwlFunction { domain, pieces })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Polyhedron {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn validate(&self) -> ValidationReport {
        validate_pwl(self)
    }

    /// Returns an error carrying the report unless the function is valid.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidPwl(report))
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        eval_pwl(self, x)
    }

    pub fn components(&self) -> ComponentSet {
        extract_components(self)
    }
}

/// Checks the cover conditions: full-dimensional domain, pieces inside the
/// domain, pieces covering the domain, and agreement of the piece functions
/// wherever pieces meet.
pub fn validate_pwl(f: &PwlFunction) -> ValidationReport {
    let mut violations = Vec::new();
    if f.domain.interior_point().is_none() {
        violations.push(Violation { kind: ViolationKind::DegenerateDomain, pieces: vec![], witness: None });
        return ValidationReport { violations };
    }

    violations.extend(
        f.pieces
            .par_iter()
            .enumerate()
            .filter_map(|(i, p)| {
                (!f.domain.contains_polyhedron(&p.region)).then(|| Violation {
                    kind: ViolationKind::PieceOutsideDomain,
                    pieces: vec![i],
                    witness: None,
                })
            })
            .collect::<Vec<_>>(),
    );

    let pairs: Vec<(usize, usize)> = (0..f.pieces.len())
        .flat_map(|i| (i + 1..f.pieces.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| f.pieces[i].func != f.pieces[j].func)
        .collect();
    let boxes: Vec<Option<Vec<(Rational, Rational)>>> = f.pieces.par_iter().map(|p| p.region.bounding_box()).collect();
    violations.extend(
        pairs
            .par_iter()
            .filter(|&&(i, j)| boxes_may_meet(&boxes[i], &boxes[j]))
            .filter_map(|&(i, j)| check_pair(f, i, j))
            .collect::<Vec<_>>(),
    );

    if let Some(gap) = find_cover_gap(f) {
        violations.push(Violation { kind: ViolationKind::CoverGap, pieces: vec![], witness: Some(gap) });
    }

    violations.sort_by(|a, b| {
        let key = |v: &Violation| (v.pieces.first().copied().unwrap_or(usize::MAX), v.kind, v.pieces.clone());
        key(a).cmp(&key(b))
    });
    ValidationReport { violations }
}

fn boxes_may_meet(a: &Option<Vec<(Rational, Rational)>>, b: &Option<Vec<(Rational, Rational)>>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a.iter().zip(b).all(|((alo, ahi), (blo, bhi))| alo <= bhi && blo <= ahi),
        // empty or unbounded pieces: let the LP decide
        _ => true,
    }
}

/// Where two pieces with different functions meet, the difference must vanish.
fn check_pair(f: &PwlFunction, i: usize, j: usize) -> Option<Violation> {
    let (a, b) = (&f.pieces[i], &f.pieces[j]);
    let diff = &a.func - &b.func;
    let mut cons = a.region.constraints();
    cons.extend(b.region.constraints());
    let bad_point = match lp::maximize(&diff.coeffs, &cons) {
        LpOutcome::Infeasible => return None,
        LpOutcome::Unbounded => None,
        LpOutcome::Optimal(s) if !(&s.value + &diff.offset).is_zero() => Some(s.point),
        LpOutcome::Optimal(_) => match lp::minimize(&diff.coeffs, &cons) {
            LpOutcome::Optimal(s) if (&s.value + &diff.offset).is_zero() => return None,
            LpOutcome::Optimal(s) => Some(s.point),
            _ => None,
        },
    };
    let mut open = a.region.interior_constraints();
    open.extend(b.region.interior_constraints());
    let (kind, witness) = match lp::strict_point(f.dim(), &open) {
        Some(w) => (ViolationKind::OverlapMismatch, Some(w)),
        None => (ViolationKind::ContinuityBreak, bad_point),
    };
    Some(Violation { kind, pieces: vec![i, j], witness })
}

/// Enumerates the regions cut out of int(Γ) by all piece facet hyperplanes;
/// each region lies entirely inside or outside every piece, so Γ is covered iff
/// every region witness lies in some piece.
fn find_cover_gap(f: &PwlFunction) -> Option<Point> {
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    let mut seen: HashMap<(Vec<Rational>, Rational), ()> = HashMap::new();
    let interior = f.domain.interior_constraints();
    for p in &f.pieces {
        for h in p.region.halfspaces() {
            let Ok(hp) = crate::geometry::normalize_hyperplane(&h.normal, &h.bound) else { continue };
            if seen.insert((hp.normal.clone(), hp.offset.clone()), ()).is_some() {
                continue;
            }
            let mut cons: Vec<LinearConstraint> = interior.clone();
            cons.push(hp.equality());
            if lp::strict_point(f.dim(), &cons).is_some() {
                hyperplanes.push(hp);
            }
        }
    }
    let regions = enumerate_regions(&f.domain, &hyperplanes).ok()?;
    regions.into_iter().map(|(_, w)| w).find(|w| !f.pieces.iter().any(|p| p.region.contains(w)))
}

pub fn eval_pwl(f: &PwlFunction, x: &[Rational]) -> Result<Rational> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: x.len() });
    }
    if !f.domain.contains(x) {
        return Err(Error::OutsideDomain);
    }
    f.pieces.iter().find(|p| p.region.contains(x)).map(|p| p.func.eval(x)).ok_or(Error::NotCovered)
}

/// Distinct piece functions in first-occurrence order.
pub fn extract_components(f: &PwlFunction) -> ComponentSet {
    let mut components: Vec<AffineFunc> = Vec::new();
    let piece_to_component = f
        .pieces
        .iter()
        .map(|p| match components.iter().position(|c| *c == p.func) {
            Some(k) => k,
            None => {
                components.push(p.func.clone());
                components.len() - 1
            }
        })
        .collect();
    ComponentSet { components, piece_to_component }
}
