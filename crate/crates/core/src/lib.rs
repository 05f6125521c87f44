//! Orbifold Hurwitz numbers computed and cross-checked four ways: the
//! cut-and-join recursion, monodromy enumeration, closed-form free energies
//! on the r-Lambert curve, and topological recursion; plus the quantum curve
//! of the partition function.

pub mod combinat;
pub mod exact_algebra;
pub mod free_energy;
pub mod hurwitz_numbers;
pub mod quantum_curve;
pub mod spectral_recursion;
