//! Free energies in the ξ-basis: fitting from Hurwitz data, the
//! differential recursion, and Hodge integral extraction.

mod basis;
mod fit;
mod hodge;
mod recursion;
mod store;
mod tpoly;
mod unstable;
mod xi;

pub use basis::{BasisKey, XiBasisFreeEnergy, XiTerm};
pub use fit::fit_free_energy;
pub use hodge::{hodge_extract, one_point_from_hodge, one_point_generating, HodgeKey, HodgeTable, OnePointTable};
pub use recursion::{diff_recursion_sides, verify_diff_recursion};
pub use store::FreeEnergyStore;
pub use tpoly::{to_t_laurent, to_t_polynomial, TPoly};
pub use unstable::{unstable_f, UnstableF};
pub use xi::{critical_factor, verify_xi_table, xi, xi_expr, xi_prime, xi_table_entry, xi_table_row, xi_x_coeff, XiFunction};

use thiserror::Error;

use crate::exact_algebra::AlgebraError;

#[derive(Debug, Error)]
pub enum FreeEnergyError {
    #[error("(g, n) = ({g}, {n}) is not stable")]
    Unstable { g: u32, n: usize },
    #[error("fit residual nonzero for class k = {class:?} at m = {point:?}: predicted {predicted}, table {actual}")]
    FitResidualNonzero { class: Vec<u32>, point: Vec<u32>, predicted: String, actual: String },
    #[error("fit system for class k = {0:?} is singular")]
    SingularFit(Vec<u32>),
    #[error("fitted coefficients are not symmetric at {0}")]
    Asymmetric(String),
    #[error("identity failure: {0}")]
    IdentityFailure(String),
    #[error("not a function of z^r: {0}")]
    NotAFunctionOfZr(String),
    #[error("not a polynomial in t: {0}")]
    NotPolynomialInT(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[cfg(test)]
mod tests;
