//! Non-local nonstabilizerness (NN) of bipartite quantum states.
//!
//! NN is the smallest amount of magic that survives every local unitary
//! `U_A ⊗ U_B`. The crate measures magic with the second stabilizer Rényi
//! entropy and provides:
//!
//! - [`qcore`]: pure states, reduced density matrices, entropies, negativity,
//!   Haar sampling and gate application.
//! - [`magic`]: Pauli expectations, stabilizer Rényi entropies, the R-matrix
//!   picture, the closed-form two-qubit NN and its Haar distribution.
//! - [`optim`]: Nelder–Mead and the multi-start local-unitary minimisation.
//! - [`rom`]: stabilizer-state enumeration and robustness of magic through an
//!   exact dense simplex solver.
//! - [`tfim`]: transverse-field Ising ground states (Lanczos and free fermions),
//!   two-point NN, measurement-induced NN and power-law fits.
//! - [`mhc`]: monitored brick-wall Haar circuits.
//!
//! Every entropy-like quantity is in nats.

pub mod error;
pub mod magic;
pub mod mhc;
pub mod optim;
pub mod qcore;
pub mod rom;
pub mod scan;
pub mod seed;
pub mod tfim;

pub use error::{Error, Result};
pub use qcore::{DensityMatrix, SchmidtSpectrum, StateVector, C64};
