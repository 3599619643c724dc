use nalgebra::{DMatrix, Matrix2};
use std::f64::consts::FRAC_PI_4;

use super::{entropy_term, gates, C64, NORM_TOL};
use crate::{Error, Result};

/// Normalised pure state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Argument(format!(
            "amplitude vector length {len} is not a power of two >= 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

impl StateVector {
    /// Wraps an amplitude vector that must already be normalised.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        let norm = l2(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Argument(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalises `amps` and wraps it.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        let norm = l2(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Argument(
                "cannot normalise a zero or non-finite vector".into(),
            ));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 || index >= 1 << n_qubits {
            return Err(Error::Argument(format!(
                "basis index {index} invalid for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0).expect("n_qubits in range")
    }

    /// `cos θ|00⟩ + sin θ|11⟩`.
    pub fn schmidt_form(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_real(&[c, 0.0, 0.0, s]).expect("unit vector")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    /// Bit mask of qubit `q` inside an amplitude index.
    pub fn mask(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `self ⊗ other`; the qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    /// Applies a `2^k × 2^k` unitary to the listed target qubits. The first
    /// target is the most significant bit of the gate's own index.
    pub fn apply_gate(&self, gate: &DMatrix<C64>, targets: &[usize]) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_gate_in_place(gate, targets)?;
        Ok(out)
    }

    pub fn apply_gate_in_place(&mut self, gate: &DMatrix<C64>, targets: &[usize]) -> Result<()> {
        self.check_targets(targets)?;
        let d = 1usize << targets.len();
        if gate.nrows() != d || gate.ncols() != d {
            return Err(Error::Argument(format!(
                "gate is {}x{} but {} targets need {d}x{d}",
                gate.nrows(),
                gate.ncols(),
                targets.len()
            )));
        }
        let defect = gates::unitarity_defect(gate);
        if defect > NORM_TOL {
            return Err(Error::Argument(format!(
                "gate is not unitary (defect {defect:e})"
            )));
        }
        self.apply_unchecked(gate, targets);
        Ok(())
    }

    /// Applies one single-qubit unitary per qubit.
    pub fn apply_local(&self, locals: &[DMatrix<C64>]) -> Result<StateVector> {
        if locals.len() != self.n_qubits {
            return Err(Error::Argument(format!(
                "{} local gates for {} qubits",
                locals.len(),
                self.n_qubits
            )));
        }
        let mut out = self.clone();
        for (q, g) in locals.iter().enumerate() {
            out.apply_gate_in_place(g, &[q])?;
        }
        Ok(out)
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &DMatrix<C64>, targets: &[usize]) {
        let k = targets.len();
        let d = 1usize << k;
        let masks: Vec<usize> = targets.iter().map(|&q| self.mask(q)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..d)
            .map(|s| {
                (0..k)
                    .filter(|j| (s >> (k - 1 - j)) & 1 == 1)
                    .map(|j| masks[j])
                    .sum()
            })
            .collect();
        let mut buf = vec![C64::new(0.0, 0.0); d];
        for base in 0..self.amps.len() {
            if base & all != 0 {
                continue;
            }
            for (b, &off) in buf.iter_mut().zip(&offsets) {
                *b = self.amps[base | off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (col, b) in buf.iter().enumerate() {
                    acc += gate[(row, col)] * b;
                }
                self.amps[base | off] = acc;
            }
        }
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        if targets.is_empty() {
            return Err(Error::Argument("no target qubits".into()));
        }
        for (i, &q) in targets.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::Argument(format!(
                    "qubit {q} out of range for {} qubits",
                    self.n_qubits
                )));
            }
            if targets[..i].contains(&q) {
                return Err(Error::Argument(format!("duplicate target qubit {q}")));
            }
        }
        Ok(())
    }

    /// Born probability of reading `outcome` on qubit `q` in the z basis.
    pub fn probability(&self, q: usize, outcome: u8) -> f64 {
        let m = self.mask(q);
        let want = if outcome == 0 { 0 } else { m };
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalises. Returns the Born
    /// probability of the branch.
    pub fn project(&mut self, q: usize, outcome: u8) -> Result<f64> {
        if q >= self.n_qubits {
            return Err(Error::Argument(format!("qubit {q} out of range")));
        }
        let p = self.probability(q, outcome);
        if p <= 0.0 {
            return Err(Error::Argument(format!(
                "outcome {outcome} on qubit {q} has zero probability"
            )));
        }
        let m = self.mask(q);
        let want = if outcome == 0 { 0 } else { m };
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m == want {
                *a *= scale;
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
        Ok(p)
    }

    /// Expectation value of `Π_q σz_q`.
    pub fn z_parity(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let sign = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum()
    }

    /// Expectation value of `Π_q σx_q`.
    pub fn x_parity(&self) -> f64 {
        let flip = self.amps.len() - 1;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| (a.conj() * self.amps[i ^ flip]).re)
            .sum()
    }
}

fn l2(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Schmidt weights `{cos²θ, sin²θ}` of a two-qubit pure state, with θ in `[0, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtSpectrum {
    theta: f64,
}

impl SchmidtSpectrum {
    /// Canonicalises any angle in `[0, π/2]` into `[0, π/4]`.
    pub fn from_theta(theta: f64) -> Self {
        let t = theta.clamp(0.0, std::f64::consts::FRAC_PI_2);
        let theta = if t > FRAC_PI_4 {
            std::f64::consts::FRAC_PI_2 - t
        } else {
            t
        };
        Self { theta }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `(cos²θ, sin²θ)`, descending.
    pub fn weights(&self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (c * c, s * s)
    }

    pub fn entropy(&self) -> f64 {
        let (a, b) = self.weights();
        entropy_term(a) + entropy_term(b)
    }
}

/// Singular values of the 2×2 amplitude matrix, expressed as an angle.
pub fn schmidt_spectrum(state: &StateVector) -> Result<SchmidtSpectrum> {
    if state.n_qubits() != 2 {
        return Err(Error::Argument(format!(
            "Schmidt angle needs 2 qubits, got {}",
            state.n_qubits()
        )));
    }
    let a = state.amplitudes();
    let m = Matrix2::new(a[0], a[1], a[2], a[3]);
    let sv = m.singular_values();
    let (hi, lo) = if sv[0] >= sv[1] {
        (sv[0], sv[1])
    } else {
        (sv[1], sv[0])
    };
    Ok(SchmidtSpectrum::from_theta(lo.atan2(hi)))
}

/// Von Neumann entropy of the first `cut` qubits of a pure state.
pub fn entanglement_entropy(state: &StateVector, cut: usize) -> Result<f64> {
    let n = state.n_qubits();
    if cut == 0 || cut >= n {
        return Err(Error::Argument(format!("cut {cut} must lie in 1..{n}")));
    }
    let rows = 1usize << cut;
    let cols = 1usize << (n - cut);
    let m = DMatrix::from_row_slice(rows, cols, state.amplitudes());
    Ok(m.singular_values()
        .iter()
        .map(|s| entropy_term(s * s))
        .sum())
}

/// One outcome of measuring every qubit except a kept pair in the z basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Born probability of this outcome.
    pub probability: f64,
    /// Unnormalised amplitudes of the kept pair, first kept qubit leftmost.
    pub amplitudes: [C64; 4],
}

impl Branch {
    /// Normalised post-measurement two-qubit state, or `None` for a zero branch.
    pub fn state(&self) -> Option<StateVector> {
        if self.probability <= 0.0 {
            return None;
        }
        StateVector::normalized(self.amplitudes.to_vec()).ok()
    }
}

/// Splits a state into the branches produced by z-measuring every qubit
/// outside `keep`.
///
/// Outcomes are indexed little-endian over the measured qubits in ascending
/// order: bit `j` of the branch index is the outcome on the `j`-th measured
/// qubit.
pub fn complement_branches(state: &StateVector, keep: [usize; 2]) -> Result<Vec<Branch>> {
    let n = state.n_qubits();
    if keep[0] >= n || keep[1] >= n || keep[0] == keep[1] {
        return Err(Error::Argument(format!(
            "invalid kept pair {keep:?} for {n} qubits"
        )));
    }
    let measured: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let zero = C64::new(0.0, 0.0);
    let mut branches = vec![
        Branch {
            probability: 0.0,
            amplitudes: [zero; 4],
        };
        1 << measured.len()
    ];
    let m0 = state.mask(keep[0]);
    let m1 = state.mask(keep[1]);
    let measured_masks: Vec<usize> = measured.iter().map(|&q| state.mask(q)).collect();
    for (i, &a) in state.amplitudes().iter().enumerate() {
        let outcome = measured_masks
            .iter()
            .enumerate()
            .filter(|(_, &m)| i & m != 0)
            .fold(0usize, |acc, (j, _)| acc | (1 << j));
        let sub = (usize::from(i & m0 != 0) << 1) | usize::from(i & m1 != 0);
        let b = &mut branches[outcome];
        b.amplitudes[sub] = a;
        b.probability += a.norm_sqr();
    }
    Ok(branches)
}
