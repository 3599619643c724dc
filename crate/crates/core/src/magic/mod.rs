//! Stabilizer Rényi entropies, the two-qubit Pauli coefficient matrix and
//! closed-form nonlocal-magic results.

mod analytic;
mod exponent;
pub mod pauli;
pub mod quad;
mod rmatrix;
mod sre;

pub use analytic::{
    haar_nn_bin_probabilities, haar_nn_mean, haar_nn_pdf, haar_nn_probability, nn_from_theta,
    nn_two_qubit_pure_analytic, NN_MAX_TWO_QUBIT,
};
pub use exponent::{exponent_law, exponent_law_parts, DecayChannel, ExponentLawInput};
pub use pauli::{pauli_expectations, pauli_expectations_rho, Pauli};
pub use rmatrix::{bloch_rotation, is_canonical_form, r_matrix, RMatrix, CANONICAL_TOL};
pub use sre::{mutual_sre, mutual_sre_mixed, sre2_from_expectations, sre2_mixed, sre2_pure};
