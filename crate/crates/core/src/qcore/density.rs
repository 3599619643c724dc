use nalgebra::DMatrix;

use super::{entropy_term, gates, StateVector, C64, EIGEN_CLIP, NORM_TOL};
use crate::{Error, Result};

/// Hermitian, unit-trace, positive operator on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates and wraps a 2×2 or 4×4 matrix.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let n_qubits = match (matrix.nrows(), matrix.ncols()) {
            (2, 2) => 1,
            (4, 4) => 2,
            (r, c) => {
                return Err(Error::Argument(format!(
                    "density matrix must be 2x2 or 4x4, got {r}x{c}"
                )))
            }
        };
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > NORM_TOL {
            return Err(Error::Argument(format!(
                "matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Argument(format!("trace {tr} differs from 1")));
        }
        let rho = Self { n_qubits, matrix };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -EIGEN_CLIP {
            return Err(Error::Argument(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        let n_qubits = if matrix.nrows() == 2 { 1 } else { 2 };
        Self { n_qubits, matrix }
    }

    /// `|ψ⟩⟨ψ|` for a one- or two-qubit state.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        if state.n_qubits() > 2 {
            return Err(Error::UnsupportedSize(format!(
                "density matrices are limited to 2 qubits, got {}",
                state.n_qubits()
            )));
        }
        let v = DMatrix::from_column_slice(state.dim(), 1, state.amplitudes());
        Ok(Self::from_matrix_unchecked(&v * v.adjoint()))
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        if !(1..=2).contains(&n_qubits) {
            return Err(Error::UnsupportedSize(format!("{n_qubits} qubits")));
        }
        let d = 1 << n_qubits;
        Ok(Self::from_matrix_unchecked(
            DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0),
        ))
    }

    /// Werner state `x|ψ₋⟩⟨ψ₋| + (1-x) I/4` with `|ψ₋⟩ = (|01⟩ - |10⟩)/√2`.
    pub fn werner(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Argument(format!("Werner weight {x} outside [0, 1]")));
        }
        let singlet = StateVector::from_real(&[0.0, 1.0, -1.0, 0.0])?;
        let proj = Self::from_pure(&singlet)?;
        let mixed = Self::maximally_mixed(2)?;
        Self::mixture(&[(x, proj), (1.0 - x, mixed)])
    }

    /// Convex combination `Σ pᵢ ρᵢ`.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Argument("empty mixture".into()))?;
        let d = first.1.dim();
        let mut m = DMatrix::zeros(d, d);
        for (p, rho) in parts {
            if rho.dim() != d || *p < 0.0 {
                return Err(Error::Argument("mixture of incompatible parts".into()));
            }
            m += &rho.matrix * C64::new(*p, 0.0);
        }
        Self::new(m)
    }

    /// `self ⊗ other` for two single-qubit states.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        if self.n_qubits != 1 || other.n_qubits != 1 {
            return Err(Error::UnsupportedSize(
                "tensor product beyond 2 qubits".into(),
            ));
        }
        Ok(Self::from_matrix_unchecked(
            self.matrix.kronecker(&other.matrix),
        ))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &DMatrix<C64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Argument("unitary dimension mismatch".into()));
        }
        let defect = gates::unitarity_defect(u);
        if defect > NORM_TOL {
            return Err(Error::Argument(format!(
                "operator is not unitary (defect {defect:e})"
            )));
        }
        Ok(Self::from_matrix_unchecked(u * &self.matrix * u.adjoint()))
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` on a two-qubit state.
    pub fn conjugate_local(&self, ua: &DMatrix<C64>, ub: &DMatrix<C64>) -> Result<Self> {
        self.conjugate(&ua.kronecker(ub))
    }

    /// Reduced state of qubit `keep` (0 or 1) of a two-qubit state.
    pub fn marginal(&self, keep: usize) -> Result<Self> {
        if self.n_qubits != 2 || keep > 1 {
            return Err(Error::Argument(format!(
                "marginal {keep} of a {}-qubit state",
                self.n_qubits
            )));
        }
        let mut m = DMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                for t in 0..2 {
                    let (i, j) = if keep == 0 {
                        (2 * a + t, 2 * b + t)
                    } else {
                        (2 * t + a, 2 * t + b)
                    };
                    m[(a, b)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Partial transpose on the second qubit.
    pub fn partial_transpose(&self) -> Result<DMatrix<C64>> {
        if self.n_qubits != 2 {
            return Err(Error::Argument("partial transpose needs 2 qubits".into()));
        }
        Ok(DMatrix::from_fn(4, 4, |r, c| {
            let (a, b) = (r / 2, r % 2);
            let (cc, d) = (c / 2, c % 2);
            self.matrix[(2 * a + d, 2 * cc + b)]
        }))
    }

    /// `S(ρ_A) + S(ρ_B) - S(ρ_AB)` of a two-qubit state.
    pub fn mutual_information(&self) -> Result<f64> {
        let sa = von_neumann_entropy(&self.marginal(0)?);
        let sb = von_neumann_entropy(&self.marginal(1)?);
        Ok((sa + sb - von_neumann_entropy(self)).max(0.0))
    }
}

/// Reduced density matrix of a pure state on one or two kept qubits, in the
/// order given by `keep`.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    if keep.is_empty() || keep.len() > 2 {
        return Err(Error::Argument(format!(
            "can keep 1 or 2 qubits, got {}",
            keep.len()
        )));
    }
    for (i, &q) in keep.iter().enumerate() {
        if q >= n {
            return Err(Error::Argument(format!(
                "qubit {q} out of range for {n} qubits"
            )));
        }
        if keep[..i].contains(&q) {
            return Err(Error::Argument(format!("duplicate qubit {q}")));
        }
    }
    let k = keep.len();
    let d = 1usize << k;
    let masks: Vec<usize> = keep.iter().map(|&q| state.mask(q)).collect();
    let all: usize = masks.iter().sum();
    let offsets: Vec<usize> = (0..d)
        .map(|s| {
            (0..k)
                .filter(|j| (s >> (k - 1 - j)) & 1 == 1)
                .map(|j| masks[j])
                .sum()
        })
        .collect();
    let amps = state.amplitudes();
    let mut m = DMatrix::<C64>::zeros(d, d);
    for base in (0..amps.len()).filter(|b| b & all == 0) {
        for (s, &os) in offsets.iter().enumerate() {
            let a = amps[base | os];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (t, &ot) in offsets.iter().enumerate() {
                m[(s, t)] += a * amps[base | ot].conj();
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// `-Σ λ ln λ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .map(|l| entropy_term(if l < 0.0 { 0.0 } else { l }))
        .sum::<f64>()
        .max(0.0)
}

/// `-ln Tr ρ²`.
pub fn renyi2_entropy(rho: &DensityMatrix) -> f64 {
    (-rho.purity().ln()).max(0.0)
}

/// `ln ‖ρ^{T_B}‖₁`.
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = rho.partial_transpose()?;
    let trace_norm: f64 = pt.symmetric_eigenvalues().iter().map(|l| l.abs()).sum();
    Ok(trace_norm.ln().max(0.0))
}

/// Mutual information between qubits `pair[0]` and `pair[1]` of a pure state.
pub fn mutual_information(state: &StateVector, pair: [usize; 2]) -> Result<f64> {
    partial_trace(state, &pair)?.mutual_information()
}
