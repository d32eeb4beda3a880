//! Complete flags of algebraic-geometry evaluation codes on Kummer curves
//! over GF(q): construction, isometry-dual and self-orthogonal
//! certification, and enumeration of the divisor offsets and isometry
//! vectors realizing the duality.
//!
//! The pipeline: [`field::Field`] provides exact GF(p^k) arithmetic with
//! discrete logs; [`curve::Curve`] models y^m = f(x) with exact valuations
//! at the infinite and ramified places; [`rr`] produces monomial bases of
//! the Riemann-Roch spaces L(aP∞ + Σβ_k Q_k); [`evalcode`] sweeps them into
//! evaluation codes, the jump set H*_β and building bases; [`flag`] and
//! [`isodual`] decide the isometry-dual property through the full-weight
//! nullspace criterion; [`selforth`] runs the characteristic-2
//! self-orthogonal construction; [`isogroup`] enumerates periods, the box
//! group T₀ and every dual-giving offset with its isometry vector.

// index loops here usually walk several slices in lockstep
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod curve;
pub mod error;
pub mod evalcode;
pub mod field;
pub mod flag;
pub mod isodual;
pub mod isogroup;
pub mod linalg;
pub mod report;
pub mod rr;
pub mod selforth;

pub use config::CurveConfig;
pub use curve::{Curve, Divisor, MonomialFunction, MonomialTerm, Place, PlaceOrdering};
pub use error::{Error, Result};
pub use evalcode::{BuildingBasis, Code, EvalSet};
pub use field::{Fe, Field};
pub use flag::Flag;
pub use isodual::{IsometryReport, IsometryStatus};
pub use selforth::{SelfOrthResult, VerificationMode};
