//! JSON formats. Rationals are always strings in lowest terms ("p/q", or "p"
//! for integers), never floats. Component and piece indices are 0-based.

use std::fmt;

use pwl_lattice::extension::{BoundaryPwl, FacetData};
use pwl_lattice::geometry::{Halfspace, Hyperplane};
use pwl_lattice::rational::{parse_rational, Rational};
use pwl_lattice::{AffineFunc, Error, LatticePolynomial, Piece, Polyhedron, PwlFunction, ReluNet1};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

pub const FORMAT_VERSION: &str = "1";

/// An exact rational as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct QVisitor;
        impl Visitor<'_> for QVisitor {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a rational as a string \"p\" or \"p/q\", or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(QVisitor)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDto {
    pub coeffs: Vec<Q>,
    pub offset: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentsDto {
    pub d: usize,
    pub components: Vec<AffineDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceDto {
    pub normal: Vec<Q>,
    pub bound: Q,
}

/// `{x : normal . x <= bound}` for every listed halfspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronDto {
    pub d: usize,
    pub halfspaces: Vec<HalfspaceDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDto {
    pub region: PolyhedronDto,
    pub func: AffineDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PwlDto {
    pub domain: PolyhedronDto,
    pub pieces: Vec<PieceDto>,
}

/// Intermediate objects of a build, emitted with `--diagnostics`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsDto {
    /// One min-term per cell, before simplification.
    pub raw_terms: Vec<Vec<usize>>,
    /// Dominant component per cell.
    pub dominants: Vec<usize>,
    /// Component indices per cell in ascending order of value.
    pub orders: Vec<Vec<usize>>,
    /// Sign vector per cell.
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDto {
    pub components: Vec<AffineDto>,
    pub terms: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneDto {
    /// The hyperplane is `{x : normal . x = offset}`; its positive side has
    /// `normal . x > offset`.
    pub normal: Vec<Q>,
    pub offset: Q,
    /// Component pairs `(i, j)` with `g_i = g_j` exactly on this hyperplane.
    pub generators: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDto {
    pub id: usize,
    pub signs: String,
    pub witness: Vec<Q>,
    pub order: Vec<usize>,
    pub dominant: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDto {
    pub domain: PolyhedronDto,
    pub components: Vec<AffineDto>,
    pub hyperplanes: Vec<HyperplaneDto>,
    pub cells: Vec<CellDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReluDto {
    #[serde(rename = "W1")]
    pub w1: Vec<Vec<Q>>,
    pub b1: Vec<Q>,
    pub w2: Vec<Q>,
    pub b2: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetDataDto {
    pub facet: usize,
    pub func: AffineDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDto {
    pub polytope: PolyhedronDto,
    pub center: Vec<Q>,
    pub facet_data: Vec<FacetDataDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Components(ComponentsDto),
    Polyhedron(PolyhedronDto),
    Pwl(PwlDto),
    Lattice(LatticeDto),
    Complex(ComplexDto),
    Relu(ReluDto),
    Boundary(BoundaryDto),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Components(_) => "components",
            Payload::Polyhedron(_) => "polyhedron",
            Payload::Pwl(_) => "pwl",
            Payload::Lattice(_) => "lattice",
            Payload::Complex(_) => "complex",
            Payload::Relu(_) => "relu",
            Payload::Boundary(_) => "boundary",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: String,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Manifest {
    pub fn new(payload: Payload) -> Self {
        Manifest { format_version: FORMAT_VERSION.to_string(), payload }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Reads a manifest, or a bare payload whose kind is inferred from its keys.
    pub fn from_json(text: &str) -> Result<Manifest, Error> {
        let malformed = |e: serde_json::Error| Error::Malformed(e.to_string());
        let mut value: Value = serde_json::from_str(text).map_err(malformed)?;
        let obj = value.as_object_mut().ok_or_else(|| Error::Malformed("expected a JSON object".into()))?;
        if !obj.contains_key("kind") {
            let kind =
                infer_kind(obj).ok_or_else(|| Error::Malformed("cannot tell what kind of payload this is".into()))?;
            obj.insert("kind".into(), Value::from(kind));
        }
        match obj.get("format_version") {
            None => {
                obj.insert("format_version".into(), Value::from(FORMAT_VERSION));
            }
            Some(Value::String(v)) if v == FORMAT_VERSION => {}
            Some(v) => return Err(Error::Malformed(format!("unsupported format_version {v}"))),
        }
        serde_json::from_value(value).map_err(malformed)
    }
}

fn infer_kind(obj: &serde_json::Map<String, Value>) -> Option<&'static str> {
    let has = |k: &str| obj.contains_key(k);
    Some(if has("pieces") {
        "pwl"
    } else if has("terms") {
        "lattice"
    } else if has("cells") {
        "complex"
    } else if has("W1") {
        "relu"
    } else if has("facet_data") {
        "boundary"
    } else if has("halfspaces") {
        "polyhedron"
    } else if has("components") {
        "components"
    } else {
        return None;
    })
}

// Conversions to and from the library types. Loading errors are reported as
// malformed input.

fn malformed(e: Error) -> Error {
    match e {
        Error::Malformed(_) => e,
        other => Error::Malformed(other.to_string()),
    }
}

impl From<&AffineFunc> for AffineDto {
    fn from(g: &AffineFunc) -> Self {
        AffineDto { coeffs: qs(&g.coeffs), offset: Q(g.offset.clone()) }
    }
}

impl AffineDto {
    pub fn to_core(&self, dim: usize) -> Result<AffineFunc, Error> {
        if self.coeffs.len() != dim {
            return Err(Error::Malformed(format!(
                "affine function has {} coefficients, expected {dim}",
                self.coeffs.len()
            )));
        }
        Ok(AffineFunc::new(unq(&self.coeffs), self.offset.0.clone()))
    }
}

impl From<&Polyhedron> for PolyhedronDto {
    fn from(p: &Polyhedron) -> Self {
        PolyhedronDto {
            d: p.dim(),
            halfspaces: p
                .halfspaces()
                .iter()
                .map(|h| HalfspaceDto { normal: qs(&h.normal), bound: Q(h.bound.clone()) })
                .collect(),
        }
    }
}

impl PolyhedronDto {
    pub fn to_core(&self) -> Result<Polyhedron, Error> {
        if self.d == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::closed(unq(&h.normal), h.bound.0.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(malformed)?;
        Polyhedron::new(self.d, hs).map_err(malformed)
    }
}

impl From<&PwlFunction> for PwlDto {
    fn from(f: &PwlFunction) -> Self {
        PwlDto {
            domain: f.domain().into(),
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceDto { region: (&p.region).into(), func: (&p.func).into() })
                .collect(),
        }
    }
}

impl PwlDto {
    pub fn to_core(&self) -> Result<PwlFunction, Error> {
        let domain = self.domain.to_core()?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| Ok(Piece { region: p.region.to_core()?, func: p.func.to_core(domain.dim())? }))
            .collect::<Result<Vec<_>, Error>>()?;
        PwlFunction::new(domain, pieces).map_err(malformed)
    }
}

impl From<&LatticePolynomial> for LatticeDto {
    fn from(p: &LatticePolynomial) -> Self {
        LatticeDto {
            components: p.components().iter().map(AffineDto::from).collect(),
            terms: p.terms().to_vec(),
            diagnostics: None,
        }
    }
}

impl LatticeDto {
    pub fn to_core(&self) -> Result<LatticePolynomial, Error> {
        let dim = self
            .components
            .first()
            .map(|g| g.coeffs.len())
            .ok_or_else(|| Error::Malformed("lattice polynomial needs a component".into()))?;
        let comps = self.components.iter().map(|g| g.to_core(dim)).collect::<Result<Vec<_>, _>>()?;
        LatticePolynomial::new(comps, self.terms.clone()).map_err(malformed)
    }
}

impl From<&Hyperplane> for HyperplaneDto {
    fn from(h: &Hyperplane) -> Self {
        HyperplaneDto {
            normal: qs(&h.normal),
            offset: Q(h.offset.clone()),
            generators: h.generators.iter().copied().collect(),
        }
    }
}

impl From<&ReluNet1> for ReluDto {
    fn from(n: &ReluNet1) -> Self {
        ReluDto { w1: n.w1.iter().map(|r| qs(r)).collect(), b1: qs(&n.b1), w2: qs(&n.w2), b2: Q(n.b2.clone()) }
    }
}

impl ReluDto {
    pub fn to_core(&self) -> Result<ReluNet1, Error> {
        ReluNet1::new(self.w1.iter().map(|r| unq(r)).collect(), unq(&self.b1), unq(&self.w2), self.b2.0.clone())
            .map_err(malformed)
    }
}

impl From<&BoundaryPwl> for BoundaryDto {
    fn from(b: &BoundaryPwl) -> Self {
        BoundaryDto {
            polytope: (&b.polytope).into(),
            center: qs(&b.center),
            facet_data: b
                .facet_data
                .iter()
                .map(|fd| FacetDataDto { facet: fd.facet, func: (&fd.func).into() })
                .collect(),
        }
    }
}

impl BoundaryDto {
    pub fn to_core(&self) -> Result<BoundaryPwl, Error> {
        let polytope = self.polytope.to_core()?;
        if self.center.len() != polytope.dim() {
            return Err(Error::Malformed(format!(
                "center has {} coordinates, expected {}",
                self.center.len(),
                polytope.dim()
            )));
        }
        let facet_data = self
            .facet_data
            .iter()
            .map(|fd| Ok(FacetData { facet: fd.facet, func: fd.func.to_core(polytope.dim())? }))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(BoundaryPwl { polytope, center: unq(&self.center), facet_data })
    }
}

impl ComponentsDto {
    pub fn to_core(&self) -> Result<Vec<AffineFunc>, Error> {
        self.components.iter().map(|g| g.to_core(self.d)).collect()
    }
}

pub fn point_to_json(x: &[Rational]) -> Vec<Q> {
    qs(x)
}
