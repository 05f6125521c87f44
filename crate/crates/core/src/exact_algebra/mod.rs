//! Exact arithmetic: rationals, sparse polynomials, rational expressions,
//! truncated Laurent series and the root quotient ring.

mod poly;
mod ratexpr;
mod rational;
mod ring;
mod rootring;
mod series;

pub use poly::{bareiss_det, SparsePoly};
pub use ratexpr::RationalExpr;
pub use rational::*;
pub use ring::{gauss_solve, Ring};
pub use rootring::{root_one, root_rational, RootRingElem};
pub use series::*;


use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("polynomial division is not exact")]
    NonExactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation error: {0}")]
    Valuation(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("coefficient v^{requested} requested but series is only known below v^{order}")]
    Truncation { requested: i64, order: i64 },
    #[error("arity mismatch")]
    Arity,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// Exact quotient of sparse polynomials.
pub fn poly_divexact(a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly, AlgebraError> {
    a.divexact(b)
}

pub fn series_compose<R: Ring>(f: &LaurentSeries<R>, g: &LaurentSeries<R>) -> Result<LaurentSeries<R>, AlgebraError> {
    f.compose(g)
}

pub fn series_reverse(f: &LaurentSeries<Rational>, order: i64) -> Result<LaurentSeries<Rational>, AlgebraError> {
    f.reverse(order)
}

pub fn root_ring_trace<B: Ring>(e: &RootRingElem<B>) -> B {
    e.trace()
}

pub fn root_ring_invert<B: Ring>(e: &RootRingElem<B>) -> Result<RootRingElem<B>, AlgebraError> {
    e.invert()
}
