//! Exact scalar and polynomial arithmetic over the rationals.
//!
//! Three kinds of values live here:
//!
//! - [`Rational`]: arbitrary precision fractions, always stored in lowest terms.
//! - [`MultiPoly`]: sparse multivariate polynomials with rational coefficients,
//!   keyed by [`Monomial`] in graded-lexicographic order.
//! - [`RationalFunction`]: reduced quotients of univariate polynomials in a
//!   single parameter `e`, the field in which one-parameter basis families live.

mod multipoly;
mod ratfunc;
mod unipoly;

pub use multipoly::{poly_arith, Monomial, MultiPoly, PolyOp};
pub use ratfunc::{ratfunc_matrix_inverse, Limit, RationalFunction};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use thiserror::Error;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("polynomials live in different rings: {left} vs {right} variables")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("matrix is not invertible over Q(e): determinant is identically zero")]
    SingularFamily,
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },
}
