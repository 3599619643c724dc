pub mod fig1;
pub mod mhc;
pub mod rom;
pub mod selfcheck;
pub mod tfim;

use serde::Serialize;

/// Published reference values, attached to outputs on request.
#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    pub quantity: &'static str,
    pub value: f64,
}

pub fn references(names: &[&'static str]) -> Vec<Reference> {
    let all = [
        ("critical_nn_exponent", 0.5),
        ("haar_mean_nn", 0.1917),
        ("rho0_nn_rom", 0.0703),
        ("max_two_qubit_nn", (4.0f64 / 3.0).ln()),
        ("mhc_minn_exponent", 0.76),
        ("mhc_mutual_information_exponent", 3.31),
    ];
    all.iter()
        .filter(|(q, _)| names.contains(q))
        .map(|&(quantity, value)| Reference { quantity, value })
        .collect()
}
