//! The arrangement of component-equality hyperplanes over a convex domain, its
//! full-dimensional cells (topes) as sign vectors, and the separation metric.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::affine::AffineFunc;
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Polyhedron};
use crate::lp::{self, LinearConstraint};
use crate::rational::{Point, Rational};

/// Side of a hyperplane: the sign of `normal . x - offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Pos => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }
}

pub fn format_signs(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.as_char()).collect()
}

fn side_constraint(h: &Hyperplane, sign: Sign) -> LinearConstraint {
    h.side_constraint(sign == Sign::Pos, true)
}

/// Enumerates every nonempty open region `int(domain) ∩ {sign pattern}` of the
/// given hyperplanes, with an exact interior witness for each.
///
/// Sign prefixes are extended one hyperplane at a time; a parent witness that
/// already lies strictly on one side settles that child without an LP. Output is
/// sorted lexicographically by sign vector (`-` before `+`).
pub fn enumerate_regions(domain: &Polyhedron, hyperplanes: &[Hyperplane]) -> Result<Vec<(Vec<Sign>, Point)>> {
    let root = domain.interior_point().ok_or(Error::DegenerateDomain)?;
    let base = domain.interior_constraints();
    let mut partial: Vec<(Vec<Sign>, Point)> = vec![(Vec::new(), root)];
    for h in hyperplanes {
        let next: Vec<Vec<(Vec<Sign>, Point)>> = partial
            .par_iter()
            .map(|(signs, witness)| {
                let here = h.side(witness);
                [Sign::Neg, Sign::Pos]
                    .into_iter()
                    .filter_map(|s| {
                        let mut child = signs.clone();
                        child.push(s);
                        let settled = matches!(
                            (s, here),
                            (Sign::Neg, std::cmp::Ordering::Less) | (Sign::Pos, std::cmp::Ordering::Greater)
                        );
                        if settled {
                            return Some((child, witness.clone()));
                        }
                        let mut cons = base.clone();
                        cons.extend(hyperplanes.iter().zip(&child).map(|(h, &s)| side_constraint(h, s)));
                        lp::strict_point(domain.dim(), &cons).map(|w| (child, w))
                    })
                    .collect()
            })
            .collect();
        partial = next.into_iter().flatten().collect();
    }
    Ok(partial)
}

/// Whether the open region with the given sign vector is nonempty.
pub fn is_region_feasible(domain: &Polyhedron, hyperplanes: &[Hyperplane], signs: &[Sign]) -> bool {
    let mut cons = domain.interior_constraints();
    cons.extend(hyperplanes.iter().zip(signs).map(|(h, &s)| side_constraint(h, s)));
    lp::strict_point(domain.dim(), &cons).is_some()
}

/// The hyperplanes `{g_i = g_j}` that meet the interior of the domain.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub domain: Polyhedron,
    pub components: Vec<AffineFunc>,
    pub hyperplanes: Vec<Hyperplane>,
    /// For each hyperplane, a point on it strictly inside the domain.
    pub hyperplane_witnesses: Vec<Point>,
}

impl Arrangement {
    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// An arrangement of arbitrary hyperplanes, keeping the distinct ones that
    /// meet the interior of the domain, in input order. Carries no components.
    pub fn from_hyperplanes(domain: &Polyhedron, candidates: &[Hyperplane]) -> Result<Arrangement> {
        let interior = domain.interior_constraints();
        if lp::strict_point(domain.dim(), &interior).is_none() {
            return Err(Error::DegenerateDomain);
        }
        let mut hyperplanes: Vec<Hyperplane> = Vec::new();
        let mut witnesses = Vec::new();
        for h in candidates {
            if h.dim() != domain.dim() {
                return Err(Error::DimensionMismatch { expected: domain.dim(), found: h.dim() });
            }
            if hyperplanes.iter().any(|k| k.same_set(h)) {
                continue;
            }
            let mut cons = interior.clone();
            cons.push(h.equality());
            if let Some(w) = lp::strict_point(domain.dim(), &cons) {
                hyperplanes.push(h.clone());
                witnesses.push(w);
            }
        }
        Ok(Arrangement { domain: domain.clone(), components: Vec::new(), hyperplanes, hyperplane_witnesses: witnesses })
    }
}

pub fn build_hyperplanes(components: &[AffineFunc], gamma: &Polyhedron) -> Result<Arrangement> {
    for g in components {
        g.check_dim(gamma.dim())?;
    }
    let interior = gamma.interior_constraints();
    if lp::strict_point(gamma.dim(), &interior).is_none() {
        return Err(Error::DegenerateDomain);
    }
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    let mut witnesses = Vec::new();
    // canonical (normal, offset) -> index into `hyperplanes`, or None if it misses int(Γ)
    let mut seen: HashMap<(Vec<Rational>, Rational), Option<usize>> = HashMap::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let diff = &components[i] - &components[j];
            if diff.is_constant() {
                continue;
            }
            let h = Hyperplane::zero_set_of(&diff)?;
            let key = (h.normal.clone(), h.offset.clone());
            let slot = match seen.get(&key) {
                Some(slot) => *slot,
                None => {
                    let mut cons = interior.clone();
                    cons.push(h.equality());
                    let slot = lp::strict_point(gamma.dim(), &cons).map(|w| {
                        hyperplanes.push(h);
                        witnesses.push(w);
                        hyperplanes.len() - 1
                    });
                    seen.insert(key, slot);
                    slot
                }
            };
            if let Some(k) = slot {
                hyperplanes[k].generators.insert((i, j));
            }
        }
    }
    Ok(Arrangement {
        domain: gamma.clone(),
        components: components.to_vec(),
        hyperplanes,
        hyperplane_witnesses: witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: usize,
    pub signs: Vec<Sign>,
    /// Strictly inside the domain and strictly off every hyperplane.
    pub witness: Point,
}

/// Separating hyperplane indices and their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub set: Vec<usize>,
    pub distance: usize,
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    pub arrangement: Arrangement,
    pub cells: Vec<Cell>,
    index: HashMap<Vec<Sign>, usize>,
}

pub fn enumerate_cells(arr: Arrangement) -> Result<CellComplex> {
    let regions = enumerate_regions(&arr.domain, &arr.hyperplanes)?;
    let cells: Vec<Cell> =
        regions.into_iter().enumerate().map(|(id, (signs, witness))| Cell { id, signs, witness }).collect();
    let index = cells.iter().map(|c| (c.signs.clone(), c.id)).collect();
    Ok(CellComplex { arrangement: arr, cells, index })
}

impl CellComplex {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: usize) -> Result<&Cell> {
        self.cells.get(id).ok_or(Error::UnknownCell(id))
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.arrangement.hyperplanes
    }

    pub fn find(&self, signs: &[Sign]) -> Option<usize> {
        self.index.get(signs).copied()
    }

    pub fn separation(&self, p: usize, q: usize) -> Result<Separation> {
        let (a, b) = (self.cell(p)?, self.cell(q)?);
        let set: Vec<usize> =
            a.signs.iter().zip(&b.signs).enumerate().filter(|(_, (x, y))| x != y).map(|(h, _)| h).collect();
        Ok(Separation { distance: set.len(), set })
    }

    pub fn distance(&self, p: usize, q: usize) -> Result<usize> {
        Ok(self.separation(p, q)?.distance)
    }

    /// Cells at distance one, in hyperplane order.
    pub fn neighbors(&self, p: usize) -> Result<Vec<usize>> {
        let signs = &self.cell(p)?.signs;
        Ok((0..signs.len())
            .filter_map(|h| {
                let mut flipped = signs.clone();
                flipped[h] = flipped[h].flip();
                self.find(&flipped)
            })
            .collect())
    }

    /// A neighbor of `p` one step closer to `q`, crossing the lowest-index
    /// separating hyperplane that admits one.
    pub fn step_toward(&self, p: usize, q: usize) -> Result<Option<(usize, usize)>> {
        let sep = self.separation(p, q)?;
        let signs = &self.cells[p].signs;
        Ok(sep.set.iter().find_map(|&h| {
            let mut flipped = signs.clone();
            flipped[h] = flipped[h].flip();
            self.find(&flipped).map(|r| (r, h))
        }))
    }

    /// A shortest unit-step path from `p` to `q`. Each step crosses one
    /// separating hyperplane, so the path has exactly `distance(p, q)` steps;
    /// breadth-first search over adjacency is the fallback if no such step is
    /// available.
    pub fn geodesic(&self, p: usize, q: usize) -> Result<Vec<usize>> {
        let expected = self.distance(p, q)?;
        let mut path = vec![p];
        let mut at = p;
        while at != q {
            match self.step_toward(at, q)? {
                Some((r, _)) => {
                    path.push(r);
                    at = r;
                }
                None => {
                    path = self.bfs_path(p, q)?;
                    break;
                }
            }
        }
        if path.len() != expected + 1 {
            return Err(Error::CorrectnessAlarm(format!(
                "path length {} between cells {p} and {q} differs from separation size {expected}",
                path.len() - 1
            )));
        }
        Ok(path)
    }

    fn bfs_path(&self, p: usize, q: usize) -> Result<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.cells.len()];
        let mut queue = VecDeque::from([p]);
        prev[p] = p;
        while let Some(c) = queue.pop_front() {
            if c == q {
                break;
            }
            for n in self.neighbors(c)? {
                if prev[n] == usize::MAX {
                    prev[n] = c;
                    queue.push_back(n);
                }
            }
        }
        if prev[q] == usize::MAX {
            return Err(Error::NoPath(p, q));
        }
        let mut path = vec![q];
        while *path.last().unwrap() != p {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        Ok(path)
    }

    /// Closed constraints of the cell closure, including the domain.
    pub fn cell_polyhedron(&self, id: usize) -> Result<Polyhedron> {
        let cell = self.cell(id)?;
        let domain = &self.arrangement.domain;
        let mut halfspaces = domain.halfspaces().to_vec();
        halfspaces.extend(self.hyperplanes().iter().zip(&cell.signs).map(|(h, &s)| h.side_halfspace(s == Sign::Pos)));
        Polyhedron::new(domain.dim(), halfspaces)
    }

    /// Hyperplanes carrying a facet of the cell: those across which another
    /// cell lies.
    pub fn facet_hyperplanes(&self, id: usize) -> Result<Vec<usize>> {
        let signs = &self.cell(id)?.signs;
        Ok((0..signs.len())
            .filter(|&h| {
                let mut flipped = signs.clone();
                flipped[h] = flipped[h].flip();
                self.find(&flipped).is_some()
            })
            .collect())
    }

    /// The cell closure with redundant constraints removed: the facet
    /// hyperplanes plus whichever domain halfspaces still matter.
    pub fn cell_closure(&self, id: usize) -> Result<Polyhedron> {
        let cell = self.cell(id)?;
        let domain = &self.arrangement.domain;
        let mut halfspaces = domain.halfspaces().to_vec();
        halfspaces.extend(
            self.facet_hyperplanes(id)?
                .into_iter()
                .map(|h| self.hyperplanes()[h].side_halfspace(cell.signs[h] == Sign::Pos)),
        );
        Ok(Polyhedron::new(domain.dim(), halfspaces)?.irredundant())
    }

    /// For cells differing in exactly one hyperplane, a point in the relative
    /// interior of their common facet: on that hyperplane, strictly inside the
    /// domain and strictly on the shared side of every other hyperplane.
    pub fn common_facet_witness(&self, p: usize, q: usize) -> Result<Option<Point>> {
        let sep = self.separation(p, q)?;
        if sep.distance != 1 {
            return Ok(None);
        }
        let h = sep.set[0];
        let hs = self.hyperplanes();
        let mut cons = self.arrangement.domain.interior_constraints();
        cons.push(hs[h].equality());
        for (k, (hk, &s)) in hs.iter().zip(&self.cells[p].signs).enumerate() {
            if k != h {
                cons.push(side_constraint(hk, s));
            }
        }
        Ok(lp::strict_point(self.arrangement.dim(), &cons))
    }

    pub fn is_sign_vector_feasible(&self, signs: &[Sign]) -> bool {
        is_region_feasible(&self.arrangement.domain, self.hyperplanes(), signs)
    }
}

impl fmt::Display for CellComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            writeln!(f, "P{} [{}] at ({})", c.id, format_signs(&c.signs), crate::rational::format_point(&c.witness))?;
        }
        Ok(())
    }
}
