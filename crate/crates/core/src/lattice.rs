use std::fmt;

use crate::affine::AffineFunc;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `max_j min_{i in terms[j]} components[i](x)`, with 0-based component indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolynomial {
    components: Vec<AffineFunc>,
    terms: Vec<Vec<usize>>,
}

impl LatticePolynomial {
    /// Each term is sorted and deduplicated; components must be pairwise
    /// distinct and share one dimension.
    pub fn new(components: Vec<AffineFunc>, terms: Vec<Vec<usize>>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Malformed("lattice polynomial needs at least one component".into()));
        };
        let dim = first.dim();
        for g in &components {
            g.check_dim(dim)?;
        }
        for (i, g) in components.iter().enumerate() {
            if components[..i].contains(g) {
                return Err(Error::Malformed(format!("component {i} repeats an earlier component")));
            }
        }
        if terms.is_empty() {
            return Err(Error::Malformed("lattice polynomial needs at least one term".into()));
        }
        let mut normalized = Vec::with_capacity(terms.len());
        for mut t in terms {
            if t.is_empty() {
                return Err(Error::Malformed("empty term".into()));
            }
            if let Some(&bad) = t.iter().find(|&&i| i >= components.len()) {
                return Err(Error::Malformed(format!("component index {bad} out of range")));
            }
            t.sort_unstable();
            t.dedup();
            normalized.push(t);
        }
        Ok(LatticePolynomial { components, terms: normalized })
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn components(&self) -> &[AffineFunc] {
        &self.components
    }

    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    /// Exact value at any point of R^d.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let values: Vec<Rational> = self.components.iter().map(|g| g.eval(x)).collect();
        Ok(self
            .terms
            .iter()
            .map(|t| t.iter().map(|&i| &values[i]).min().expect("terms are nonempty"))
            .max()
            .expect("at least one term")
            .clone())
    }

    /// Drops duplicate terms and every term that strictly contains another:
    /// a superset's minimum never exceeds its subset's, so it never wins the max.
    pub fn simplify(&self) -> LatticePolynomial {
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for (k, t) in self.terms.iter().enumerate() {
            let dominated =
                self.terms.iter().enumerate().any(|(j, s)| (s.len() < t.len() && is_subset(s, t)) || (s == t && j < k));
            if !dominated {
                kept.push(t.clone());
            }
        }
        LatticePolynomial { components: self.components.clone(), terms: kept }
    }

    pub fn is_simplified(&self) -> bool {
        self.simplify().terms.len() == self.terms.len()
    }
}

pub fn evaluate_lattice(p: &LatticePolynomial, x: &[Rational]) -> Result<Rational> {
    p.evaluate(x)
}

pub fn simplify(p: &LatticePolynomial) -> LatticePolynomial {
    p.simplify()
}

/// Both slices sorted ascending.
fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|i| big.binary_search(i).is_ok())
}

/// `max(min(g1, g3), min(g2, g3))`, numbering components from 1.
impl fmt::Display for LatticePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |t: &Vec<usize>| {
            let names: Vec<String> = t.iter().map(|i| format!("g{}", i + 1)).collect();
            if names.len() == 1 {
                names[0].clone()
            } else {
                format!("min({})", names.join(", "))
            }
        };
        let terms: Vec<String> = self.terms.iter().map(term).collect();
        if terms.len() == 1 {
            write!(f, "{}", terms[0])
        } else {
            write!(f, "max({})", terms.join(", "))
        }
    }
}
