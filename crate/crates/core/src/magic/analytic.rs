//! Closed forms for two-qubit pure states and Haar ensembles.

use super::quad::tanh_sinh;
use crate::qcore::{schmidt_spectrum, StateVector};
use crate::{Error, Result};

/// Largest nonlocal magic of a two-qubit pure state, `ln(4/3)`.
pub const NN_MAX_TWO_QUBIT: f64 = 0.287_682_072_451_780_9;

const QUAD_TOL: f64 = 1e-8;

/// `ln(8 / (7 + cos 8θ))`.
pub fn nn_from_theta(theta: f64) -> f64 {
    (8.0 / (7.0 + (8.0 * theta).cos())).ln().max(0.0)
}

/// Nonlocal magic of a two-qubit pure state from its Schmidt angle.
pub fn nn_two_qubit_pure_analytic(state: &StateVector) -> Result<f64> {
    if state.n_qubits() != 2 {
        return Err(Error::Argument("analytic NN needs two qubits".into()));
    }
    Ok(nn_from_theta(schmidt_spectrum(state)?.theta()))
}

/// Density of `y = NN` over Haar-random two-qubit states; zero outside
/// `(0, ln 4/3)`.
pub fn haar_nn_pdf(y: f64) -> f64 {
    if !(y > 0.0 && y < NN_MAX_TWO_QUBIT) {
        return 0.0;
    }
    let em1 = y.exp_m1();
    let z2 = 1.0 - 3.0 * em1;
    if z2 <= 0.0 {
        return 0.0;
    }
    let z = z2.sqrt();
    let q = (-0.5 * y).exp();
    let half = (0.5 * y).exp();
    let minus = -4.0 * (-y).exp_m1() / (1.0 + q * z);
    let plus = 1.0 + q * z;
    let gap = 4.0 * em1 / (half + z);
    let bracket = (half + z) * minus.sqrt() + gap * plus.sqrt();
    3.0 * q / (4.0 * z * (2.0 * em1).sqrt()) * bracket
}

/// `∫ P(y) dy` over `[lo, hi]` clipped to the support.
pub fn haar_nn_probability(lo: f64, hi: f64) -> f64 {
    let (lo, hi) = (lo.max(0.0), hi.min(NN_MAX_TWO_QUBIT));
    if hi <= lo {
        return 0.0;
    }
    tanh_sinh(haar_nn_pdf, lo, hi, QUAD_TOL)
}

/// Probability mass of each histogram bin delimited by `edges`.
pub fn haar_nn_bin_probabilities(edges: &[f64]) -> Vec<f64> {
    edges
        .windows(2)
        .map(|w| haar_nn_probability(w[0], w[1]))
        .collect()
}

/// Haar average `ȳ = ∫ y P(y) dy`.
pub fn haar_nn_mean() -> f64 {
    tanh_sinh(|y| y * haar_nn_pdf(y), 0.0, NN_MAX_TWO_QUBIT, QUAD_TOL)
}
