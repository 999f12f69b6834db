//! Max-min representation of a PWL function by its components.
//!
//! Every cell of the component arrangement carries a strict linear order of the
//! components (read off at the cell witness; no two components tie anywhere in
//! an open cell) and a dominant component `n(P)` equal to `f` there. The term of
//! cell `P` collects the components lying above `f` on `P`, and the maximum of
//! these minima over all cells reproduces `f` on the whole domain.

use std::fmt;

use rayon::prelude::*;

use crate::affine::AffineFunc;
use crate::arrangement::{build_hyperplanes, enumerate_cells, format_signs, Cell, CellComplex};
use crate::error::{Error, Result};
use crate::geometry::Polyhedron;
use crate::lattice::LatticePolynomial;
use crate::pwl::{Piece, PwlFunction};

/// Components of the arrangement sorted ascending by value on one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOrder {
    pub cell: usize,
    pub order: Vec<usize>,
    rank: Vec<usize>,
}

impl CellOrder {
    fn from_order(cell: usize, order: Vec<usize>) -> Self {
        let mut rank = vec![0; order.len()];
        for (pos, &i) in order.iter().enumerate() {
            rank[i] = pos;
        }
        CellOrder { cell, order, rank }
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    /// `g_i <= g_j` on the whole cell.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rank[i] <= self.rank[j]
    }

    /// The component realizing `min_{i in term} g_i` on the cell.
    pub fn reduce_term(&self, term: &[usize]) -> usize {
        *term.iter().min_by_key(|&&i| self.rank[i]).expect("terms are nonempty")
    }

    /// The component realizing the whole polynomial on the cell.
    pub fn reduce(&self, terms: &[Vec<usize>]) -> usize {
        terms.iter().map(|t| self.reduce_term(t)).max_by_key(|&m| self.rank[m]).expect("at least one term")
    }
}

pub fn cell_order(complex: &CellComplex, cell: usize) -> Result<CellOrder> {
    let c = complex.cell(cell)?;
    let comps = &complex.arrangement.components;
    let values: Vec<_> = comps.iter().map(|g| g.eval(&c.witness)).collect();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::TieDetected(w[0], w[1], cell));
    }
    Ok(CellOrder::from_order(cell, order))
}

/// The unique component agreeing with `f` at the cell witness.
pub fn dominant_component(f: &PwlFunction, components: &[AffineFunc], cell: &Cell) -> Result<usize> {
    let value = f.eval(&cell.witness).map_err(|_| Error::NoMatch(cell.id))?;
    let mut hits = components.iter().enumerate().filter(|(_, g)| g.eval(&cell.witness) == value);
    let (first, _) = hits.next().ok_or(Error::NoMatch(cell.id))?;
    if let Some((second, _)) = hits.next() {
        return Err(Error::Ambiguous(first, second, cell.id));
    }
    Ok(first)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessStrategy {
    /// Scan all components, smallest index first.
    Brute,
    /// Induct along a geodesic from `P` toward `Q`.
    Inductive,
}

/// The construction with all intermediate objects kept for inspection.
#[derive(Clone, Debug)]
pub struct Representation {
    pub complex: CellComplex,
    pub orders: Vec<CellOrder>,
    /// `n(P)` per cell.
    pub dominants: Vec<usize>,
    /// `S_P` per cell, before simplification.
    pub raw_terms: Vec<Vec<usize>>,
    pub polynomial: LatticePolynomial,
}

/// Validates `f`, then builds its representation with diagnostics.
pub fn analyze(f: &PwlFunction) -> Result<Representation> {
    f.ensure_valid()?;
    analyze_valid(f)
}

/// Like [`analyze`] but trusts the caller that `f` is valid.
pub fn analyze_valid(f: &PwlFunction) -> Result<Representation> {
    let components = f.components().components;
    let complex = enumerate_cells(build_hyperplanes(&components, f.domain())?)?;
    let per_cell: Vec<(CellOrder, usize)> = complex
        .cells
        .par_iter()
        .map(|c| Ok((cell_order(&complex, c.id)?, dominant_component(f, &components, c)?)))
        .collect::<Result<_>>()?;
    let (orders, dominants): (Vec<_>, Vec<_>) = per_cell.into_iter().unzip();
    let raw_terms: Vec<Vec<usize>> = orders
        .iter()
        .zip(&dominants)
        .map(|(o, &n)| {
            let mut s: Vec<usize> = (0..components.len()).filter(|&i| o.le(n, i)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let polynomial = LatticePolynomial::new(components, raw_terms.clone())?.simplify();
    Ok(Representation { complex, orders, dominants, raw_terms, polynomial })
}

pub fn build_representation(f: &PwlFunction) -> Result<LatticePolynomial> {
    Ok(analyze(f)?.polynomial)
}

impl Representation {
    pub fn unsimplified(&self) -> LatticePolynomial {
        LatticePolynomial::new(self.polynomial.components().to_vec(), self.raw_terms.clone())
            .expect("raw terms are well formed")
    }

    /// `g_k <= f` on cell `p`.
    pub fn below_on(&self, p: usize, k: usize) -> bool {
        self.orders[p].le(k, self.dominants[p])
    }

    /// `g_k >= f` on cell `q`.
    pub fn above_on(&self, q: usize, k: usize) -> bool {
        self.orders[q].le(self.dominants[q], k)
    }

    /// A component `k` with `g_k <= f` on `p` and `g_k >= f` on `q`.
    pub fn lemma_witness(&self, p: usize, q: usize, strategy: WitnessStrategy) -> Result<usize> {
        self.complex.cell(p)?;
        self.complex.cell(q)?;
        let k = match strategy {
            WitnessStrategy::Brute => {
                (0..self.polynomial.components().len()).find(|&k| self.below_on(p, k) && self.above_on(q, k))
            }
            WitnessStrategy::Inductive => Some(self.inductive_witness(p, q)?),
        };
        match k {
            Some(k) if self.below_on(p, k) && self.above_on(q, k) => Ok(k),
            _ => Err(Error::NoWitness(p, q)),
        }
    }

    fn inductive_witness(&self, p: usize, q: usize) -> Result<usize> {
        let (np, nq) = (self.dominants[p], self.dominants[q]);
        match self.complex.distance(p, q)? {
            0 => Ok(np),
            // f is continuous across the common facet, so g_np and g_nq cross there.
            1 => Ok(if self.orders[p].le(np, nq) { np } else { nq }),
            _ => {
                let (r, h) = self.complex.step_toward(p, q)?.ok_or(Error::NoPath(p, q))?;
                let k = self.inductive_witness(r, q)?;
                if self.below_on(p, k) {
                    return Ok(k);
                }
                if !self.complex.separation(p, q)?.set.contains(&h) {
                    return Err(Error::CorrectnessAlarm(format!(
                        "hyperplane {h} separates cells {p} and {r} but not {p} and {q}"
                    )));
                }
                // g_k - g_np vanishes on h and is positive on p, hence negative on
                // the far side where r and q lie.
                Ok(np)
            }
        }
    }
}

/// Per-cell outcome of [`verify_symbolic`]; component indices refer to
/// [`VerificationReport::components`], term indices to the polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellVerdict {
    pub cell: usize,
    pub dominant: usize,
    /// The component the polynomial reduces to on this cell.
    pub attained: usize,
    /// Terms whose reduced minimum lies strictly above `f` on the cell.
    pub exceeding_terms: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Union of the function's and the polynomial's components.
    pub components: Vec<AffineFunc>,
    pub complex: CellComplex,
    pub cells: Vec<CellVerdict>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellVerdict> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.cells {
            let signs = format_signs(&self.complex.cells[v.cell].signs);
            if v.pass {
                writeln!(f, "cell {} [{}]: PASS (f = {})", v.cell, signs, self.components[v.dominant])?;
            } else {
                write!(
                    f,
                    "cell {} [{}]: FAIL: polynomial reduces to {} but f = {}",
                    v.cell, signs, self.components[v.attained], self.components[v.dominant]
                )?;
                if !v.exceeding_terms.is_empty() {
                    write!(f, "; terms {:?} exceed f", v.exceeding_terms)?;
                }
                writeln!(f)?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Decides `p == f` on the whole domain of `f`.
///
/// Builds the arrangement of all components of both sides. On each open cell
/// every component sits at a fixed rank, so the polynomial equals the component
/// obtained by reducing each term to its lowest member and taking the highest
/// result; comparing that with `f`'s dominant component decides equality on the
/// cell, and continuity extends it to the closure. `f` must be valid.
pub fn verify_symbolic(f: &PwlFunction, p: &LatticePolynomial) -> Result<VerificationReport> {
    if p.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: p.dim() });
    }
    let mut components = f.components().components;
    let remap: Vec<usize> = p
        .components()
        .iter()
        .map(|g| {
            components.iter().position(|c| c == g).unwrap_or_else(|| {
                components.push(g.clone());
                components.len() - 1
            })
        })
        .collect();
    let terms: Vec<Vec<usize>> = p.terms().iter().map(|t| t.iter().map(|&i| remap[i]).collect()).collect();
    let complex = enumerate_cells(build_hyperplanes(&components, f.domain())?)?;
    let cells = complex
        .cells
        .par_iter()
        .map(|c| {
            let order = cell_order(&complex, c.id)?;
            let dominant = dominant_component(f, &components, c)?;
            let attained = order.reduce(&terms);
            let exceeding_terms = terms
                .iter()
                .enumerate()
                .filter(|(_, t)| !order.le(order.reduce_term(t), dominant))
                .map(|(j, _)| j)
                .collect();
            Ok(CellVerdict { cell: c.id, dominant, attained, exceeding_terms, pass: attained == dominant })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport { components, complex, cells })
}

/// Convenience wrapper computing the full analysis of `f` first.
pub fn lemma_witness(f: &PwlFunction, p: usize, q: usize, strategy: WitnessStrategy) -> Result<usize> {
    analyze(f)?.lemma_witness(p, q, strategy)
}

/// Compiles a lattice polynomial into pieces over a bounded full-dimensional
/// domain: one piece per cell of the component arrangement, carrying the
/// component the polynomial reduces to on that cell.
pub fn lattice_to_pwl(p: &LatticePolynomial, gamma: &Polyhedron) -> Result<PwlFunction> {
    if p.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch { expected: gamma.dim(), found: p.dim() });
    }
    if gamma.interior_point().is_none() {
        return Err(Error::DegenerateDomain);
    }
    if !gamma.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let complex = enumerate_cells(build_hyperplanes(p.components(), gamma)?)?;
    let pieces = complex
        .cells
        .par_iter()
        .map(|c| {
            let order = cell_order(&complex, c.id)?;
            let k = order.reduce(p.terms());
            Ok(Piece { region: complex.cell_closure(c.id)?, func: p.components()[k].clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    PwlFunction::new(gamma.clone(), pieces)
}

/// Coordinatewise representation of a vector-valued PWL function, each
/// coordinate over its own component family.
pub fn build_representation_vector(fs: &[PwlFunction]) -> Result<Vec<LatticePolynomial>> {
    if let Some(first) = fs.first() {
        if fs.iter().any(|f| f.domain() != first.domain()) {
            return Err(Error::DomainMismatch);
        }
    }
    fs.par_iter().map(build_representation).collect()
}
