//! Error types shared across the crate.

use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("substitution constants must satisfy cb^2 = q*ct^2")]
    ConstraintViolation,
    #[error("scalar is not an invertible monomial")]
    NotInvertible,
    #[error("q-power with coefficient {coeff} is below half-integer resolution")]
    FractionalQPower { coeff: Rational64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("exponent vector has length {got}, torus rank is {want}")]
    RankMismatch { want: usize, got: usize },
    #[error("elements live in different quantum tori ({left} vs {right})")]
    TorusMismatch { left: String, right: String },
    #[error("relation vectors are not Z-linearly independent")]
    DependentRelations,
    #[error("relation scalars are inconsistent on a dependent combination")]
    InconsistentRelations,
    #[error("generator images do not preserve the commutation cocycle ({i}, {j})")]
    CocycleMismatch { i: usize, j: usize },
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
    #[error("weyl products need an antisymmetric cocycle")]
    NotWeylOrdered,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("malformed triangulation: {0}")]
    Malformed(String),
    #[error("edge gluing is orientation-incompatible: {0}")]
    OrientationClash(String),
    #[error("edge {0} is a boundary edge")]
    BoundaryEdge(String),
    #[error("edge {0} has the same triangle on both sides")]
    SelfGlued(String),
    #[error("surface has boundary edges")]
    HasBoundary,
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error("face {0} is glued to its own tetrahedron")]
    SelfAdjacentFace(String),
    #[error("the pair is not related by a 2-3 move on the given face")]
    NotAPachnerPair,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("state variables unresolved")]
    UnresolvedState,
    #[error("no angle structure supplied")]
    NoAngles,
    #[error("monomial is not in the flip transition table")]
    NotEven,
    #[error("flip image is not Laurent (denominator x'+x'^-1)")]
    NonLaurentImage,
    #[error("element outside the generator domain of the map")]
    OutOfDomain,
    #[error("glued web has non-matching boundary degrees at {0}")]
    DegreeMismatch(String),
    #[error("torus error: {0}")]
    Torus(#[from] TorusError),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
}
