use thiserror::Error;

use crate::pwl::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("hyperplane normal is the zero vector")]
    ZeroNormal,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("domain has no interior point")]
    DegenerateDomain,
    #[error("domain must be bounded for this operation")]
    UnboundedDomain,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("point of the domain is not covered by any piece")]
    NotCovered,
    #[error("invalid piecewise linear function: {0}")]
    InvalidPwl(ValidationReport),
    #[error("components {0} and {1} tie at the witness of cell {2}")]
    TieDetected(usize, usize, usize),
    #[error("no component matches the function value on cell {0}")]
    NoMatch(usize),
    #[error("components {0} and {1} both match the function value on cell {2}")]
    Ambiguous(usize, usize, usize),
    #[error("no witness component for cells {0} and {1}")]
    NoWitness(usize, usize),
    #[error("no unit-step path between cells {0} and {1}")]
    NoPath(usize, usize),
    #[error("cell index {0} out of range")]
    UnknownCell(usize),
    #[error("coordinate functions are defined on different domains")]
    DomainMismatch,
    #[error("center is not strictly inside the polytope")]
    CenterNotInterior,
    #[error("inconsistent boundary data: {0}")]
    InconsistentBoundaryData(String),
    #[error("target polyhedron does not contain the domain")]
    TargetDoesNotContainDomain,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("internal invariant violated: {0}")]
    CorrectnessAlarm(String),
}
