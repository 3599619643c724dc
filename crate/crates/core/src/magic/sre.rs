use super::pauli::{pauli_expectations, pauli_expectations_rho};
use crate::qcore::{DensityMatrix, StateVector};
use crate::{Error, Result};

/// `M₂ = −ln(2^{-N} Σ_P ⟨ψ|P|ψ⟩⁴)`.
pub fn sre2_pure(state: &StateVector) -> f64 {
    let e = pauli_expectations(state);
    let s4: f64 = e.iter().map(|v| v.powi(4)).sum();
    let value = -(s4 / state.dim() as f64).ln();
    value.max(0.0)
}

/// `M₂ = −ln(Σ_P Tr(ρP)⁴ / Σ_P Tr(ρP)²)`.
pub fn sre2_mixed(rho: &DensityMatrix) -> f64 {
    sre2_from_expectations(pauli_expectations_rho(rho))
}

/// Mixed-state SRE from a full list of Pauli expectation values.
pub fn sre2_from_expectations<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let (s2, s4) = values
        .into_iter()
        .fold((0.0, 0.0), |(s2, s4), v| (s2 + v * v, s4 + v.powi(4)));
    (-(s4 / s2).ln()).max(0.0)
}

/// `I = M(ψ) − M(ρ_A) − M(ρ_B)` for a two-qubit pure state.
pub fn mutual_sre(state: &StateVector) -> Result<f64> {
    if state.n_qubits() != 2 {
        return Err(Error::Argument("mutual SRE needs two qubits".into()));
    }
    let rho = DensityMatrix::from_pure(state)?;
    Ok(sre2_pure(state) - marginal_sres(&rho)?)
}

/// Mixed-state generalisation `M(ρ) − M(ρ_A) − M(ρ_B)`.
pub fn mutual_sre_mixed(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::Argument("mutual SRE needs two qubits".into()));
    }
    Ok(sre2_mixed(rho) - marginal_sres(rho)?)
}

fn marginal_sres(rho: &DensityMatrix) -> Result<f64> {
    Ok(sre2_mixed(&rho.marginal(0)?) + sre2_mixed(&rho.marginal(1)?))
}
