//! Exact computation of generalized Casimir invariant counts of Lie algebras
//! over the rationals, and verification of one-parameter contractions.
//!
//! An algebra is given by structure constants ([`LieAlgebra`]). Its number of
//! functionally independent coadjoint invariants is `dim - rank M(x)`, where
//! `M(x)` is the commutator matrix ([`invariants::CommutatorMatrix`]). A
//! contraction is the limit `e -> 0` of the constants in a basis `g(e)`
//! ([`contraction::ContractionFamily`]); the invariant count can only grow
//! along a contraction, which [`contraction::verify_monotonicity`] checks.

pub mod catalog;
pub mod contraction;
pub mod invariants;
pub mod lie;
pub mod linalg;
pub mod scalar_poly;

pub use contraction::{ContractionError, ContractionFamily, EpsilonStructure};
pub use invariants::{CommutatorMatrix, CountOptions, InvariantReport};
pub use lie::{BasisChange, LieAlgebra, LieError};
pub use scalar_poly::{MultiPoly, Rational, RationalFunction};
