//! Periodic transverse-field Ising chain `H = −Σ σˣσˣ − h Σ σᶻ`.
//!
//! Small chains are solved by Lanczos in the even `Πσᶻ` sector; large chains
//! use the free-fermion correlators of the same sector. Sites are 1-based in
//! every public interface: `r` names the second site of the pair `(1, r)`.

mod ed;
mod fit;
mod free_fermion;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ed::{ground_state_lanczos, GroundState, ED_MAX_SITES};
pub use fit::{effective_exponent, fit_exponential, fit_power_law, FitResult, FitWindow};
pub use free_fermion::{free_fermion_correlators, Correlators, FreeFermionChain};

use crate::magic::{is_canonical_form, nn_two_qubit_pure_analytic, r_matrix, RMatrix};
use crate::qcore::{complement_branches, gates, partial_trace, DensityMatrix, StateVector, C64};
use crate::scan::{RunningStats, ScanRecord};
use crate::{seed, Error, Result};

/// Tolerance of the canonical-form assertion on two-site states.
pub const CANONICAL_CHECK_TOL: f64 = 1e-7;

/// Largest chain for exhaustive outcome enumeration.
pub const ENUMERATE_MAX_SITES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Ed,
    FreeFermion,
}

impl Backend {
    pub fn label(self) -> &'static str {
        match self {
            Backend::Ed => "ed",
            Backend::FreeFermion => "free-fermion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfimConfig {
    #[serde(rename = "L")]
    pub l: usize,
    pub h: f64,
    pub backend: Backend,
}

impl TfimConfig {
    pub fn new(l: usize, h: f64, backend: Backend) -> Result<Self> {
        let c = Self { l, h, backend };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 4 {
            return Err(Error::Argument(format!("chain length {} below 4", self.l)));
        }
        if !self.h.is_finite() || self.h < 0.0 {
            return Err(Error::Argument(format!(
                "field h = {} must be finite and non-negative",
                self.h
            )));
        }
        if self.backend == Backend::Ed && self.l > ED_MAX_SITES {
            return Err(Error::Resource(format!(
                "exact diagonalisation is capped at L = {ED_MAX_SITES}; use the free-fermion backend"
            )));
        }
        Ok(())
    }

    fn check_site(&self, r: usize) -> Result<()> {
        if r < 2 || r > self.l {
            return Err(Error::Argument(format!(
                "site r = {r} outside 2..={}",
                self.l
            )));
        }
        Ok(())
    }
}

/// Ground state of an ED configuration.
pub fn ground_state_ed(config: &TfimConfig) -> Result<GroundState> {
    config.validate()?;
    if config.backend != Backend::Ed {
        return Err(Error::Argument(
            "ground_state_ed needs the ED backend".into(),
        ));
    }
    ground_state_lanczos(config.l, config.h)
}

fn checked(rho: DensityMatrix) -> Result<(DensityMatrix, RMatrix)> {
    let r = r_matrix(&rho)?;
    if !is_canonical_form(&r, CANONICAL_CHECK_TOL) {
        return Err(Error::SymmetryViolation(
            "two-site state is not in canonical form; the ground state breaks the Z2 symmetry"
                .into(),
        ));
    }
    Ok((rho, r))
}

/// Reduced state of sites `(1, r)` with its R-matrix, asserted canonical.
pub fn two_site_rdm_canonical(state: &StateVector, r: usize) -> Result<(DensityMatrix, RMatrix)> {
    if r < 2 || r > state.n_qubits() {
        return Err(Error::Argument(format!(
            "site r = {r} outside 2..={}",
            state.n_qubits()
        )));
    }
    checked(partial_trace(state, &[0, r - 1])?)
}

/// Two-site state `¼[I + ⟨σᶻ⟩(Z⊗I + I⊗Z) + Σ_a ⟨σᵃσᵃ⟩ σᵃ⊗σᵃ]`.
pub fn rdm_from_correlators(c: &Correlators) -> Result<(DensityMatrix, RMatrix)> {
    let mut e = [[0.0; 4]; 4];
    e[0][0] = 1.0;
    e[0][3] = c.sz;
    e[3][0] = c.sz;
    e[1][1] = c.xx;
    e[2][2] = c.yy;
    e[3][3] = c.zz;
    let r = RMatrix::from_entries(e)?;
    checked(r.to_density_matrix()?)
}

enum Source {
    Ed(StateVector),
    FreeFermion(FreeFermionChain),
}

impl Source {
    fn new(config: &TfimConfig) -> Result<Self> {
        config.validate()?;
        Ok(match config.backend {
            Backend::Ed => Source::Ed(ground_state_ed(config)?.state),
            Backend::FreeFermion => Source::FreeFermion(FreeFermionChain::new(config.l, config.h)?),
        })
    }

    fn pair(&self, r: usize) -> Result<(DensityMatrix, RMatrix)> {
        match self {
            Source::Ed(s) => two_site_rdm_canonical(s, r),
            Source::FreeFermion(chain) => rdm_from_correlators(&chain.correlators(r)?),
        }
    }
}

/// Two-point NN of sites `(1, r)` for every `r` in `sites`.
///
/// Emits `nn`, `mutual_information` and the correlators `sz`, `xx`, `yy`,
/// `zz` per site. The two-site state is canonical, so its NN is its SRE.
pub fn two_point_nn_scan(config: &TfimConfig, sites: &[usize]) -> Result<Vec<ScanRecord>> {
    for &r in sites {
        config.check_site(r)?;
    }
    let source = Source::new(config)?;
    let per_site: Vec<Result<Vec<ScanRecord>>> = sites
        .par_iter()
        .map(|&r| {
            let (rho, rm) = source.pair(r)?;
            let e = rm.entries();
            let rec = |name: &str, v: f64| {
                ScanRecord::new(config.backend.label(), config.l, config.h, r, name, v)
            };
            Ok(vec![
                rec("nn", rm.sre2()),
                rec("mutual_information", rho.mutual_information()?),
                rec("sz", e[0][3]),
                rec("xx", e[1][1]),
                rec("yy", e[2][2]),
                rec("zz", e[3][3]),
            ])
        })
        .collect();
    let mut out = Vec::new();
    for recs in per_site {
        out.extend(recs?);
    }
    Ok(out)
}

/// Measurement axis for the complement qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn label(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    /// Unitary mapping this axis' eigenbasis onto the computational basis.
    pub fn basis_change(self) -> Option<DMatrix<C64>> {
        match self {
            Axis::X => Some(gates::h()),
            Axis::Y => Some(gates::h() * gates::s_dagger()),
            Axis::Z => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinnMode {
    Enumerate,
    Sample { n_samples: usize, seed: u64 },
}

/// Outcome-averaged NN of a kept pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MinnEstimate {
    pub value: f64,
    /// Zero in enumerate mode.
    pub stderr: f64,
    /// Outcomes summed (enumerate) or drawn (sample).
    pub n_outcomes: usize,
    /// `Σ pᵢ` over enumerated outcomes; 1 in sample mode.
    pub total_probability: f64,
}

fn rotate_measured(state: &StateVector, keep: [usize; 2], axis: Axis) -> Result<StateVector> {
    let mut s = state.clone();
    if let Some(v) = axis.basis_change() {
        for q in (0..state.n_qubits()).filter(|q| !keep.contains(q)) {
            s.apply_gate_in_place(&v, &[q])?;
        }
    }
    Ok(s)
}

fn branch_nn(amplitudes: &[C64; 4]) -> Result<f64> {
    nn_two_qubit_pure_analytic(&StateVector::normalized(amplitudes.to_vec())?)
}

/// Measures every qubit outside `keep` along `axis` and averages the
/// analytic NN of the remaining pair over outcomes.
pub fn minn(
    state: &StateVector,
    keep: [usize; 2],
    axis: Axis,
    mode: MinnMode,
) -> Result<MinnEstimate> {
    let n = state.n_qubits();
    let rotated = rotate_measured(state, keep, axis)?;
    match mode {
        MinnMode::Enumerate => {
            if n > ENUMERATE_MAX_SITES {
                return Err(Error::Resource(format!(
                    "enumeration is capped at {ENUMERATE_MAX_SITES} sites; use sample mode"
                )));
            }
            let branches = complement_branches(&rotated, keep)?;
            let mut value = 0.0;
            let mut total = 0.0;
            for b in &branches {
                total += b.probability;
                if b.probability > 1e-300 {
                    value += b.probability * branch_nn(&b.amplitudes)?;
                }
            }
            Ok(MinnEstimate {
                value,
                stderr: 0.0,
                n_outcomes: branches.len(),
                total_probability: total,
            })
        }
        MinnMode::Sample {
            n_samples,
            seed: base,
        } => {
            if n_samples < 2 {
                return Err(Error::Argument(
                    "sample mode needs at least 2 samples".into(),
                ));
            }
            let measured: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
            let keep_tag = (keep[0] as u64) << 32 | keep[1] as u64;
            let values: Vec<Result<f64>> = (0..n_samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = seed::rng(base, &[keep_tag, axis as u64, i as u64]);
                    let mut s = rotated.clone();
                    for &q in &measured {
                        let p0 = s.probability(q, 0);
                        let outcome = u8::from(rng.random::<f64>() >= p0);
                        s.project(q, outcome)?;
                    }
                    let branch = complement_branches(&s, keep)?
                        .into_iter()
                        .max_by(|a, b| a.probability.total_cmp(&b.probability))
                        .ok_or_else(|| Error::Solver("no branch after projection".into()))?;
                    branch_nn(&branch.amplitudes)
                })
                .collect();
            let stats = values
                .into_iter()
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .collect::<RunningStats>();
            Ok(MinnEstimate {
                value: stats.mean(),
                stderr: stats.stderr(),
                n_outcomes: n_samples,
                total_probability: 1.0,
            })
        }
    }
}

/// MINN of sites `(1, r)` along `axis` on the ED ground state.
pub fn minn_scan(
    config: &TfimConfig,
    sites: &[usize],
    axis: Axis,
    mode: MinnMode,
) -> Result<Vec<ScanRecord>> {
    if config.backend != Backend::Ed {
        return Err(Error::Argument(
            "MINN needs the global state; use the ED backend".into(),
        ));
    }
    if matches!(mode, MinnMode::Enumerate) && config.l > ENUMERATE_MAX_SITES {
        return Err(Error::Resource(format!(
            "enumeration is capped at L = {ENUMERATE_MAX_SITES}; use sample mode"
        )));
    }
    for &r in sites {
        config.check_site(r)?;
    }
    let state = ground_state_ed(config)?.state;
    sites
        .iter()
        .map(|&r| {
            let est = minn(&state, [0, r - 1], axis, mode)?;
            let rec = ScanRecord::new(
                config.backend.label(),
                config.l,
                config.h,
                r,
                "minn",
                est.value,
            )
            .with_axis(axis.label())
            .with_stats(est.stderr, est.n_outcomes);
            Ok(match mode {
                MinnMode::Sample { seed, .. } => rec.with_seed(seed),
                MinnMode::Enumerate => rec,
            })
        })
        .collect()
}
