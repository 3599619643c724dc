//! Nonlocal magic as the minimum of the second SRE over local unitaries.
//!
//! Each qubit carries a `u3(θ, φ, λ)` rotation. The objective is evaluated in
//! the Pauli picture: a local unitary maps the expectation vector through
//! `Õ = 1 ⊕ O` on every tensor factor, with `O` its Bloch rotation, so no
//! state vectors or matrices are rebuilt per evaluation.

mod nelder_mead;

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Matrix3, Matrix4};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use nelder_mead::{nelder_mead, NelderMeadConfig, NelderMeadResult};

use crate::magic::{pauli_expectations, pauli_expectations_rho, sre2_from_expectations};
use crate::qcore::{gates, DensityMatrix, StateVector, C64};
use crate::{seed, Error, Result};

/// Multi-start settings shared by every local-unitary search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub n_starts: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub nelder_mead: NelderMeadConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            n_starts: 100,
            seed: 0,
            nelder_mead: NelderMeadConfig::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn with_starts(mut self, n_starts: usize) -> Self {
        self.n_starts = n_starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_starts == 0 {
            return Err(Error::Argument("n_starts must be at least 1".into()));
        }
        if !(self.nelder_mead.initial_step > 0.0) {
            return Err(Error::Argument(
                "initial simplex step must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One `(θ, φ, λ)` triple per qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalUnitaryParams {
    pub angles: Vec<[f64; 3]>,
}

impl LocalUnitaryParams {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            angles: vec![[0.0; 3]; n_qubits],
        }
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 3 != 0 {
            return Err(Error::Argument(format!(
                "{} angles is not a multiple of 3",
                flat.len()
            )));
        }
        Ok(Self {
            angles: flat.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.angles.iter().flatten().copied().collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.angles.len()
    }

    /// Same unitaries (up to global phase) with `θ ∈ [0, π]`, `φ, λ ∈ [0, 2π)`.
    pub fn canonicalized(&self) -> Self {
        let angles = self
            .angles
            .iter()
            .map(|&[t, p, l]| {
                let t = t.rem_euclid(TAU);
                let (t, p, l) = if t > PI {
                    (TAU - t, p + PI, l + PI)
                } else {
                    (t, p, l)
                };
                [t, p.rem_euclid(TAU), l.rem_euclid(TAU)]
            })
            .collect();
        Self { angles }
    }

    pub fn unitaries(&self) -> Vec<DMatrix<C64>> {
        self.angles
            .iter()
            .map(|&[t, p, l]| gates::u3(t, p, l))
            .collect()
    }

    pub fn bloch_rotations(&self) -> Vec<Matrix3<f64>> {
        self.angles
            .iter()
            .map(|&[t, p, l]| u3_bloch_rotation(t, p, l))
            .collect()
    }
}

fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Bloch rotation of `u3(θ, φ, λ) ∝ R_z(φ) R_y(θ) R_z(λ)`.
pub fn u3_bloch_rotation(theta: f64, phi: f64, lambda: f64) -> Matrix3<f64> {
    rot_z(phi) * rot_y(theta) * rot_z(lambda)
}

fn embed(o: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(o);
    m
}

/// Applies `Õ_q` to tensor factor `q` of an `n`-qubit Pauli expectation vector.
pub fn rotate_pauli_vector(e: &[f64], rotations: &[Matrix3<f64>]) -> Vec<f64> {
    let n = rotations.len();
    debug_assert_eq!(e.len(), 1 << (2 * n));
    let mut cur = e.to_vec();
    let mut next = vec![0.0; e.len()];
    for (q, o) in rotations.iter().enumerate() {
        let m = embed(o);
        let stride = 1usize << (2 * (n - 1 - q));
        for (p, out) in next.iter_mut().enumerate() {
            let mu = (p / stride) % 4;
            let base = p - mu * stride;
            *out = (0..4).map(|nu| m[(mu, nu)] * cur[base + nu * stride]).sum();
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// SRE of the state with expectations `e` after the local unitaries `flat`.
fn rotated_sre(e: &[f64], flat: &[f64]) -> f64 {
    let rotations: Vec<Matrix3<f64>> = flat
        .chunks_exact(3)
        .map(|c| u3_bloch_rotation(c[0], c[1], c[2]))
        .collect();
    sre2_from_expectations(rotate_pauli_vector(e, &rotations))
}

/// Upper corner of the sampling box for `n` qubits.
pub fn parameter_box(n_qubits: usize) -> Vec<f64> {
    (0..n_qubits).flat_map(|_| [PI, TAU, TAU]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    /// Final value of every start, in start order.
    pub start_values: Vec<f64>,
    pub best_start: usize,
}

impl MultiStartResult {
    /// Minimum over the first `k` starts for `k = 1..=n_starts`.
    pub fn running_minimum(&self) -> Vec<f64> {
        self.start_values
            .iter()
            .scan(f64::INFINITY, |m, &v| {
                *m = m.min(v);
                Some(*m)
            })
            .collect()
    }
}

/// Nelder–Mead from the origin and from `n_starts − 1` uniform points in
/// `[0, upper]`. Start `i` draws from `seed::rng(config.seed, [i])`, and
/// ties go to the lower index, so the result does not depend on scheduling.
pub fn multi_start<F>(
    objective: F,
    upper: &[f64],
    config: &OptimizerConfig,
) -> Result<MultiStartResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let runs: Vec<Result<NelderMeadResult>> = (0..config.n_starts)
        .into_par_iter()
        .map(|i| {
            let start: Vec<f64> = if i == 0 {
                vec![0.0; upper.len()]
            } else {
                let mut rng = seed::rng(config.seed, &[i as u64]);
                upper.iter().map(|&u| rng.random::<f64>() * u).collect()
            };
            nelder_mead(&objective, &start, &config.nelder_mead)
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let best_start = (0..runs.len())
        .min_by(|&a, &b| runs[a].value.total_cmp(&runs[b].value).then(a.cmp(&b)))
        .unwrap_or(0);
    Ok(MultiStartResult {
        argmin: runs[best_start].argmin.clone(),
        value: runs[best_start].value,
        start_values: runs.iter().map(|r| r.value).collect(),
        best_start,
    })
}

/// Outcome of a local-unitary minimisation.
#[derive(Debug, Clone, PartialEq)]
pub struct NnResult {
    /// Minimised SRE in nats.
    pub value: f64,
    pub params: LocalUnitaryParams,
    /// SRE of the untransformed input.
    pub input_sre: f64,
    pub start_values: Vec<f64>,
}

fn minimise_over_locals(e: &[f64], n_qubits: usize, config: &OptimizerConfig) -> Result<NnResult> {
    let input_sre = sre2_from_expectations(e.iter().copied());
    let ms = multi_start(|x| rotated_sre(e, x), &parameter_box(n_qubits), config)?;
    Ok(NnResult {
        value: ms.value.max(0.0),
        params: LocalUnitaryParams::from_flat(&ms.argmin)?.canonicalized(),
        input_sre,
        start_values: ms.start_values,
    })
}

/// `min_{U_A, U_B} M₂((U_A ⊗ U_B) ρ (U_A ⊗ U_B)†)` for a two-qubit state.
pub fn nn_optimize(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<NnResult> {
    if rho.n_qubits() != 2 {
        return Err(Error::Argument(
            "nn_optimize needs a two-qubit state".into(),
        ));
    }
    minimise_over_locals(&pauli_expectations_rho(rho), 2, config)
}

/// [`nn_optimize`] for a pure state.
pub fn nn_optimize_state(state: &StateVector, config: &OptimizerConfig) -> Result<NnResult> {
    if state.n_qubits() != 2 {
        return Err(Error::Argument(
            "nn_optimize needs a two-qubit state".into(),
        ));
    }
    minimise_over_locals(&pauli_expectations(state), 2, config)
}

/// Minimum SRE over products of single-qubit unitaries for up to four
/// qubits. `side_a` lists the qubits of one half; since every qubit gets
/// its own rotation, the result bounds the NN across that cut from above.
pub fn nn_optimize_nqubit(
    state: &StateVector,
    side_a: &[usize],
    config: &OptimizerConfig,
) -> Result<NnResult> {
    let n = state.n_qubits();
    if n > 4 {
        return Err(Error::UnsupportedSize(format!("{n} qubits (at most 4)")));
    }
    let mut seen = vec![false; n];
    for &q in side_a {
        if q >= n || std::mem::replace(&mut seen[q], true) {
            return Err(Error::Argument(format!("invalid bipartition {side_a:?}")));
        }
    }
    if side_a.is_empty() || side_a.len() == n {
        return Err(Error::Argument("both halves must be non-empty".into()));
    }
    minimise_over_locals(&pauli_expectations(state), n, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic::{bloch_rotation, nn_from_theta, sre2_mixed};
    use crate::qcore::haar_state_seeded;

    fn quick() -> OptimizerConfig {
        OptimizerConfig::default().with_starts(20).with_seed(7)
    }

    #[test]
    fn u3_rotation_matches_conjugation() {
        for (t, p, l) in [(0.3, 1.1, 2.5), (2.9, 5.0, 0.2), (0.0, 0.0, 0.0)] {
            let direct = bloch_rotation(&gates::u3(t, p, l));
            assert!((direct - u3_bloch_rotation(t, p, l)).norm() < 1e-12);
        }
    }

    #[test]
    fn canonicalization_preserves_unitary() {
        let p = LocalUnitaryParams::from_flat(&[4.0, -1.0, 9.0, -7.0, 3.0, 0.5]).unwrap();
        let c = p.canonicalized();
        for (a, b) in p.bloch_rotations().iter().zip(c.bloch_rotations()) {
            assert!((a - b).norm() < 1e-12);
        }
        for [t, ph, l] in c.angles {
            assert!((0.0..=PI).contains(&t));
            assert!((0.0..TAU).contains(&ph) && (0.0..TAU).contains(&l));
        }
        for u in p.unitaries() {
            assert!(gates::unitarity_defect(&u) < 1e-12);
        }
    }

    #[test]
    fn pauli_rotation_matches_state_rotation() {
        let s = haar_state_seeded(3, 5).unwrap();
        let p =
            LocalUnitaryParams::from_flat(&[0.4, 1.0, 2.0, 1.3, 0.1, 5.0, 2.2, 3.3, 4.4]).unwrap();
        let rotated = s.apply_local(&p.unitaries()).unwrap();
        let via = rotate_pauli_vector(&pauli_expectations(&s), &p.bloch_rotations());
        for (a, b) in pauli_expectations(&rotated).iter().zip(via) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_state_reaches_theorem_value() {
        let r = nn_optimize_state(&StateVector::schmidt_form(0.3), &quick()).unwrap();
        assert!((r.value - nn_from_theta(0.3)).abs() < 1e-6);
    }

    #[test]
    fn werner_is_already_optimal() {
        let w = DensityMatrix::werner(0.5).unwrap();
        let r = nn_optimize(&w, &quick()).unwrap();
        assert!((r.value - sre2_mixed(&w)).abs() < 1e-6);
    }

    #[test]
    fn rotated_bell_is_free() {
        let s = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0])
            .unwrap()
            .apply_gate(&gates::t(), &[0])
            .unwrap();
        let r = nn_optimize_state(&s, &quick()).unwrap();
        assert!(r.value < 1e-6);
        assert!(r.input_sre > 0.1);
    }

    #[test]
    fn deterministic_and_monotone() {
        let s = haar_state_seeded(2, 3).unwrap();
        let a = nn_optimize_state(&s, &quick()).unwrap();
        let b = nn_optimize_state(&s, &quick()).unwrap();
        assert_eq!(a, b);
        assert!(a.value <= a.input_sre + 1e-9);
        let ms = MultiStartResult {
            argmin: vec![],
            value: 0.0,
            start_values: a.start_values.clone(),
            best_start: 0,
        };
        assert!(ms.running_minimum().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn nqubit_guards() {
        let five = StateVector::zero(5);
        assert!(matches!(
            nn_optimize_nqubit(&five, &[0, 1], &quick()),
            Err(Error::UnsupportedSize(_))
        ));
        let four = StateVector::zero(4);
        assert!(nn_optimize_nqubit(&four, &[0, 0], &quick()).is_err());
        assert!(nn_optimize_nqubit(&four, &[], &quick()).is_err());
        assert!(OptimizerConfig::default()
            .with_starts(0)
            .validate()
            .is_err());
    }
}
