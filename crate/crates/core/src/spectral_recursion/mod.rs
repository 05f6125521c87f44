//! The spectral-curve recursion on the r-Lambert curve, computed by exact
//! residues at all ramification points at once, and the local toolkit in
//! the Airy coordinate.

mod chart;
mod eo;
mod local;

pub use chart::{airy_coordinates, deck_series, LocalChart};
pub use eo::{default_order, eo_kernel, eo_residue, eo_step, WForm};
pub use local::{
    inverse_shift, lift, phi_h_decompose, principal_part, pull_back, raise, residue_lemma_check, residue_lemma_sample, verify_residue_lemma,
    xi_form_series, PhiH, ResidueReport,
    Tagged,
};

use thiserror::Error;

use crate::exact_algebra::AlgebraError;
use crate::free_energy::FreeEnergyError;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("(g, n) = ({g}, {n}) is not stable")]
    Unstable { g: u32, n: usize },
    #[error("truncation too shallow: {0}")]
    TruncationTooShallow(String),
    #[error("Galois asymmetry: {0}")]
    GaloisAsymmetry(String),
    #[error("recursion output differs from the Laplace-side form at (g, n) = ({g}, {n}), r = {r}: {detail}")]
    MismatchWithLaplace { g: u32, n: usize, r: u32, detail: String },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    FreeEnergy(#[from] FreeEnergyError),
    #[error(transparent)]
    Algebra(AlgebraError),
}

impl From<AlgebraError> for SpectralError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Truncation { requested, order } => {
                SpectralError::TruncationTooShallow(format!("coefficient {} requested, series known below {}", requested, order))
            }
            other => SpectralError::Algebra(other),
        }
    }
}

#[cfg(test)]
mod tests;
