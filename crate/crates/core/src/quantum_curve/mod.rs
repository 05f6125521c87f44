//! Principal specialization, the `S_m` hierarchy and the partition
//! function, with exact checks of the quantum-curve operators.

mod partition;
mod report;
mod special;

pub use partition::{
    apply_p, apply_q, build_partition, build_partition_strict, commutator_defect, verify_commutator, verify_operator_p,
    verify_operator_q, BiSeries, PartitionTruncation,
};
pub use report::{CheckReport, Window};
pub use special::{
    check_sm_ode, principal_specialize, principal_specialize_termwise, sm_function, sm_table, verify_sm_ode, PrincipalSpecial,
    SmFunction,
};

use thiserror::Error;

use crate::free_energy::FreeEnergyError;

#[derive(Debug, Error)]
pub enum QuantumCurveError {
    #[error("{check} fails at {witness}")]
    IdentityFailure { check: String, witness: String },
    #[error("principal specialization is not a polynomial in t: {0}")]
    NotPolynomialInT(String),
    #[error("principal specialization of F_{{{g},{n}}} has degree {degree} > {bound}")]
    DegreeBound { g: u32, n: usize, degree: i64, bound: i64 },
    #[error("Hurwitz table lacks H_{{{g},{n}}}^({r})({mu:?})")]
    InsufficientTable { r: u32, g: u32, n: usize, mu: Vec<u32> },
    #[error(transparent)]
    FreeEnergy(#[from] FreeEnergyError),
}
