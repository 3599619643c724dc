//! Robustness of magic over the pure stabilizer states of one or two qubits.

mod simplex;

use nalgebra::{DMatrix, DVector};

pub use simplex::{LinearProgram, LpSolution};

use crate::magic::pauli::{masks, pauli_matrix};
use crate::magic::pauli_expectations_rho;
use crate::optim::{multi_start, parameter_box, rotate_pauli_vector, u3_bloch_rotation};
use crate::optim::{LocalUnitaryParams, NnResult, OptimizerConfig};
use crate::qcore::{DensityMatrix, C64};
use crate::{Error, Result};

/// Pure stabilizer states as Pauli expectation vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerStateSet {
    n_qubits: usize,
    states: Vec<Vec<f64>>,
}

impl StabilizerStateSet {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    /// Same set with its members reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if perm.len() != self.len()
            || perm
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Argument("not a permutation".into()));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            states: perm.iter().map(|&i| self.states[i].clone()).collect(),
        })
    }
}

fn commute(p: usize, q: usize, n: usize) -> bool {
    let (xp, zp) = masks(p, n);
    let (xq, zq) = masks(q, n);
    ((xp & zq) ^ (zp & xq)).count_ones() % 2 == 0
}

/// All pure stabilizer states of `n ∈ {1, 2}` qubits.
///
/// Every independent commuting pair (single generator for one qubit) with
/// every sign choice yields the projector `Π (I + s_i g_i)/2`; duplicates
/// coming from different generator choices of one group are removed.
pub fn enumerate_stabilizer_states(n_qubits: usize) -> Result<StabilizerStateSet> {
    let generator_sets: Vec<Vec<usize>> = match n_qubits {
        1 => (1..4).map(|g| vec![g]).collect(),
        2 => (1..16)
            .flat_map(|a| (a + 1..16).map(move |b| vec![a, b]))
            .filter(|g| commute(g[0], g[1], 2))
            .collect(),
        _ => {
            return Err(Error::UnsupportedSize(format!(
                "stabilizer enumeration supports 1 or 2 qubits, got {n_qubits}"
            )))
        }
    };
    let dim = 1 << n_qubits;
    let mut states: Vec<Vec<f64>> = Vec::new();
    for gens in generator_sets {
        for signs in 0..1usize << gens.len() {
            let mut proj = DMatrix::<C64>::identity(dim, dim);
            for (k, &g) in gens.iter().enumerate() {
                let s = if signs >> k & 1 == 1 { -1.0 } else { 1.0 };
                let factor = (DMatrix::identity(dim, dim)
                    + pauli_matrix(g, n_qubits) * C64::new(s, 0.0))
                    * C64::new(0.5, 0.0);
                proj = proj * factor;
            }
            let rho = DensityMatrix::new(proj)?;
            let e: Vec<f64> = pauli_expectations_rho(&rho)
                .into_iter()
                .map(|v| v.round())
                .collect();
            if !states.contains(&e) {
                states.push(e);
            }
        }
    }
    Ok(StabilizerStateSet { n_qubits, states })
}

/// Optimal decomposition `target = Σ x_i s_i` with minimal `Σ|x_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct RomSolution {
    pub coefficients: Vec<f64>,
    pub l1: f64,
    /// Robustness of magic, `l1 − 1`.
    pub rom: f64,
    /// Max-norm of `Σ x_i s_i − target`.
    pub residual: f64,
}

/// Solves `min Σ|x_i|` s.t. `Σ x_i s_i = target` by splitting `x = x⁺ − x⁻`.
pub fn solve_l1_lp(target: &[f64], basis: &StabilizerStateSet) -> Result<RomSolution> {
    let rows = 1usize << (2 * basis.n_qubits);
    if target.len() != rows {
        return Err(Error::Argument(format!(
            "target has {} entries, expected {rows}",
            target.len()
        )));
    }
    let m = basis.len();
    let a = DMatrix::from_fn(rows, 2 * m, |r, j| {
        let v = basis.states[j % m][r];
        if j < m {
            v
        } else {
            -v
        }
    });
    let lp = LinearProgram::new(
        a,
        DVector::from_column_slice(target),
        DVector::from_element(2 * m, 1.0),
    )?;
    let sol = lp.solve()?;
    let coefficients: Vec<f64> = (0..m).map(|i| sol.x[i] - sol.x[i + m]).collect();
    let residual = (0..rows)
        .map(|r| {
            let recon: f64 = coefficients
                .iter()
                .zip(&basis.states)
                .map(|(x, s)| x * s[r])
                .sum();
            (recon - target[r]).abs()
        })
        .fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::Solver(format!(
            "reconstruction residual {residual:e}"
        )));
    }
    let l1: f64 = coefficients.iter().map(|x| x.abs()).sum();
    Ok(RomSolution {
        coefficients,
        l1,
        rom: (l1 - 1.0).max(0.0),
        residual,
    })
}

/// Robustness of magic of a one- or two-qubit density matrix.
pub fn robustness_of_magic(rho: &DensityMatrix) -> Result<RomSolution> {
    let basis = enumerate_stabilizer_states(rho.n_qubits())?;
    solve_l1_lp(&pauli_expectations_rho(rho), &basis)
}

/// Minimum robustness of magic over `U_A ⊗ U_B`.
///
/// Uses the multi-start Nelder–Mead driver with the LP value as objective.
pub fn nn_rom(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<NnResult> {
    if rho.n_qubits() != 2 {
        return Err(Error::Argument("nn_rom needs a two-qubit state".into()));
    }
    let basis = enumerate_stabilizer_states(2)?;
    let e = pauli_expectations_rho(rho);
    let input = solve_l1_lp(&e, &basis)?.rom;
    let objective = |flat: &[f64]| {
        let rotations: Vec<_> = flat
            .chunks_exact(3)
            .map(|c| u3_bloch_rotation(c[0], c[1], c[2]))
            .collect();
        solve_l1_lp(&rotate_pauli_vector(&e, &rotations), &basis).map_or(f64::NAN, |s| s.rom)
    };
    let ms = multi_start(objective, &parameter_box(2), config)?;
    Ok(NnResult {
        value: ms.value.max(0.0),
        params: LocalUnitaryParams::from_flat(&ms.argmin)?.canonicalized(),
        input_sre: input,
        start_values: ms.start_values,
    })
}
