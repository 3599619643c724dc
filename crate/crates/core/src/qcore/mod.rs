//! Dense linear algebra for small qubit systems.
//!
//! Conventions used throughout the crate:
//!
//! - Qubit 0 is the leftmost tensor factor. In an `n`-qubit amplitude index the
//!   bit for qubit `q` has weight `2^(n-1-q)`, so `|q0 q1 ... q(n-1)⟩` reads
//!   the index in binary from the most significant bit down.
//! - Entropies are natural-log valued.
//! - Eigenvalues below zero by less than [`EIGEN_CLIP`] are treated as zero
//!   before taking logarithms.

mod density;
pub mod gates;
mod haar;
mod state;

pub use density::{
    log_negativity, mutual_information, partial_trace, renyi2_entropy, von_neumann_entropy,
    DensityMatrix,
};
pub use haar::{haar_random_state, haar_random_unitary, haar_state_seeded, haar_unitary_seeded};
pub use state::{
    complement_branches, entanglement_entropy, schmidt_spectrum, Branch, SchmidtSpectrum,
    StateVector,
};

/// Complex scalar used for amplitudes and operators.
pub type C64 = num_complex::Complex64;

/// Tolerance for norm and unitarity checks.
pub const NORM_TOL: f64 = 1e-10;

/// Largest negative eigenvalue accepted as round-off.
pub const EIGEN_CLIP: f64 = 1e-9;

/// Entropy contribution `-λ ln λ` with the `0 ln 0 = 0` convention.
pub(crate) fn entropy_term(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else {
        -lambda * lambda.ln()
    }
}
