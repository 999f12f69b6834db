//! Exact conversion between piecewise linear functions on convex polyhedra and
//! max-min (lattice) polynomials of their affine components.
//!
//! All arithmetic is over arbitrary-precision rationals; every geometric
//! predicate is decided by an exact simplex solver, so results carry no
//! tolerance.

pub mod affine;
pub mod arrangement;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod lattice;
pub mod latticizer;
pub mod lp;
pub mod pwl;
pub mod rational;
pub mod sample;

pub use affine::AffineFunc;
pub use arrangement::{build_hyperplanes, enumerate_cells, Arrangement, Cell, CellComplex, Separation, Sign};
pub use error::{Error, Result};
pub use extension::{extend_to_space, import_relu, radial_extend, BoundaryPwl, FacetData, ReluNet1};
pub use geometry::{
    functional_range_on, interior_point, lp_optimize, normalize_hyperplane, Halfspace, Hyperplane, Polyhedron,
};
pub use lattice::{evaluate_lattice, simplify, LatticePolynomial};
pub use latticizer::{
    analyze, build_representation, build_representation_vector, cell_order, dominant_component, lattice_to_pwl,
    verify_symbolic, CellOrder, Representation, VerificationReport, WitnessStrategy,
};
pub use pwl::{eval_pwl, extract_components, validate_pwl, ComponentSet, Piece, PwlFunction, ValidationReport};
pub use rational::{Point, Rational};
