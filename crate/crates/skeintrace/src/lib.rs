//! # skeintrace
//!
//! Exact symbolic computation of quantum trace maps and quantum UV-IR maps
//! on ideally triangulated surfaces and 3-manifolds, together with the
//! evaluation and projection maps relating them.
//!
//! Everything is computed over an exact coefficient ring
//! (`Z[zeta, A^(1/4), CT, CB, q^(th/pi)]` with `zeta^2 = -1`, `q = -A^2`);
//! no floating point appears anywhere.  The main layers are:
//!
//! * [`scalar`] — the coefficient ring,
//! * [`qtorus`] — quantum tori over exponent lattices, Weyl ordering,
//!   monomial-relation lattice quotients,
//! * [`complex`] — combinatorial ideal triangulations of surfaces and
//!   3-manifolds, flips and 2-3 moves, face suspensions, angle structures,
//! * [`trace2d`] / [`trace3d`] — the quantum trace maps,
//! * [`uvir2d`] / [`uvir3d`] — the stated quantum UV-IR maps, the
//!   evaluation maps, naturality and compatibility checkers, and the
//!   projection recovering the trace from the UV-IR image.

pub mod complex;
pub mod error;
pub mod fileio;
pub mod hnf;
pub mod qtorus;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod text;
pub mod trace2d;
pub mod trace3d;
pub mod uvir2d;
pub mod uvir3d;

pub use error::{ComplexError, ScalarError, TorusError, TraceError};
pub use qtorus::{MonomialRelation, QuantumTorus, ReductionSystem, Side, TorusElem, TorusHom};
pub use scalar::{AngleExpr, AngleId, Rat, Scalar};
