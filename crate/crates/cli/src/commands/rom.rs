use std::f64::consts::FRAC_PI_8;

use nonlocal_magic::optim::OptimizerConfig;
use nonlocal_magic::qcore::{gates, DensityMatrix};
use nonlocal_magic::rom::{nn_rom, robustness_of_magic};
use nonlocal_magic::StateVector;
use serde::Serialize;

use super::{references, Reference};
use crate::config::{ResolvedConfig, RomRunConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::Report;

#[derive(Debug, Clone, Serialize)]
pub struct RomReport {
    pub state: String,
    pub n_qubits: usize,
    pub rom: f64,
    pub l1: f64,
    pub residual: f64,
    pub coefficients: Vec<f64>,
    /// Minimum over local unitaries; two-qubit states only.
    pub nn_rom: Option<f64>,
    pub nn_rom_angles: Option<Vec<[f64; 3]>>,
    pub starts: usize,
    pub references: Vec<Reference>,
}

/// `cos(π/8)|0⟩ + sin(π/8)|1⟩`.
pub fn phi0() -> StateVector {
    let (s, c) = FRAC_PI_8.sin_cos();
    StateVector::from_real(&[c, s]).expect("normalised")
}

/// `½|φ₀φ₀⟩⟨φ₀φ₀| + ½|00⟩⟨00|`.
pub fn rho0() -> CliResult<DensityMatrix> {
    let p = phi0();
    Ok(DensityMatrix::mixture(&[
        (0.5, DensityMatrix::from_pure(&p.tensor(&p))?),
        (0.5, DensityMatrix::from_pure(&StateVector::zero(2))?),
    ])?)
}

pub fn parse_state(name: &str) -> CliResult<DensityMatrix> {
    let bad = || CliError::Usage(format!("unknown state {name:?}"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    Ok(match name.split_once(':') {
        None if name == "rho0" => rho0()?,
        None if name == "phi0-mixed" => {
            DensityMatrix::from_pure(&phi0())?.tensor(&DensityMatrix::maximally_mixed(1)?)?
        }
        None if name == "t-state" => {
            let plus = StateVector::from_real(&[1.0, 1.0])?;
            DensityMatrix::from_pure(&plus.apply_gate(&gates::t(), &[0])?)?
        }
        Some(("werner", x)) => DensityMatrix::werner(num(x)?)?,
        Some(("schmidt", t)) => DensityMatrix::from_pure(&StateVector::schmidt_form(num(t)?))?,
        _ => return Err(bad()),
    })
}

pub fn run(c: &RomRunConfig, run: &ResolvedConfig, out: &mut OutputDir) -> CliResult<Report> {
    let rho = parse_state(&c.state)?;
    let direct = robustness_of_magic(&rho)?;
    let nn = if rho.n_qubits() == 2 {
        Some(nn_rom(
            &rho,
            &OptimizerConfig::default()
                .with_starts(c.starts)
                .with_seed(run.seed),
        )?)
    } else {
        None
    };
    let report = RomReport {
        state: c.state.clone(),
        n_qubits: rho.n_qubits(),
        rom: direct.rom,
        l1: direct.l1,
        residual: direct.residual,
        coefficients: direct.coefficients.clone(),
        nn_rom: nn.as_ref().map(|n| n.value),
        nn_rom_angles: nn.as_ref().map(|n| n.params.angles.clone()),
        starts: c.starts,
        references: if run.paper_targets && c.state == "rho0" {
            references(&["rho0_nn_rom"])
        } else {
            Vec::new()
        },
    };
    out.write_json("rom.json", &report)?;
    let mut line = format!("{}: RoM {:.6}", c.state, report.rom);
    if let Some(v) = report.nn_rom {
        line.push_str(&format!(", local-unitary minimum {v:.6}"));
    }
    Ok(Report {
        lines: vec![line],
        ..Report::default()
    })
}
