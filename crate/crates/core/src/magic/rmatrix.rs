use nalgebra::{DMatrix, Matrix3, Matrix4};

use super::pauli::{pauli_expectations_rho, pauli_matrix, Pauli};
use super::sre::sre2_from_expectations;
use crate::qcore::{DensityMatrix, C64};
use crate::{Error, Result};

/// Default tolerance of [`is_canonical_form`].
pub const CANONICAL_TOL: f64 = 1e-8;

/// Pauli-basis coefficients `R_{μν} = Tr(ρ σ_μ ⊗ σ_ν)` of a two-qubit state.
///
/// Row index `μ` belongs to qubit A, column index `ν` to qubit B, so qubit
/// A's Bloch vector is column 0 and qubit B's is row 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix {
    entries: [[f64; 4]; 4],
}

impl RMatrix {
    pub fn from_rho(rho: &DensityMatrix) -> Result<Self> {
        if rho.n_qubits() != 2 {
            return Err(Error::Argument("R matrix needs a two-qubit state".into()));
        }
        let e = pauli_expectations_rho(rho);
        let mut entries = [[0.0; 4]; 4];
        for (p, v) in e.into_iter().enumerate() {
            entries[p / 4][p % 4] = v;
        }
        Ok(Self { entries })
    }

    /// Checks `R_00 = 1` and `|R_μν| ≤ 1`.
    pub fn from_entries(entries: [[f64; 4]; 4]) -> Result<Self> {
        if (entries[0][0] - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!(
                "R_00 = {} differs from 1",
                entries[0][0]
            )));
        }
        if entries
            .iter()
            .flatten()
            .any(|v| !v.is_finite() || v.abs() > 1.0 + 1e-10)
        {
            return Err(Error::Argument("R entries must lie in [-1, 1]".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, mu: Pauli, nu: Pauli) -> f64 {
        self.entries[mu as usize][nu as usize]
    }

    /// Flattened in canonical Pauli order.
    pub fn to_vec(&self) -> Vec<f64> {
        self.entries.iter().flatten().copied().collect()
    }

    pub fn bloch_a(&self) -> [f64; 3] {
        [self.entries[1][0], self.entries[2][0], self.entries[3][0]]
    }

    pub fn bloch_b(&self) -> [f64; 3] {
        [self.entries[0][1], self.entries[0][2], self.entries[0][3]]
    }

    /// 3×3 correlation block `T_ij = R_ij`, `i, j ∈ {x, y, z}`.
    pub fn correlation(&self) -> [[f64; 3]; 3] {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entries[i + 1][j + 1];
            }
        }
        t
    }

    pub fn sum_fourth(&self) -> f64 {
        self.entries.iter().flatten().map(|v| v.powi(4)).sum()
    }

    /// Equals `4 Tr ρ²`.
    pub fn sum_squares(&self) -> f64 {
        self.entries.iter().flatten().map(|v| v * v).sum()
    }

    /// Second stabilizer Rényi entropy of the underlying state.
    pub fn sre2(&self) -> f64 {
        sre2_from_expectations(self.entries.iter().flatten().copied())
    }

    /// `ρ = ¼ Σ R_μν σ_μ ⊗ σ_ν`, validated.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        for (p, &v) in self.entries.iter().flatten().enumerate() {
            if v != 0.0 {
                m += pauli_matrix(p, 2) * C64::new(v / 4.0, 0.0);
            }
        }
        DensityMatrix::new(m)
    }

    /// Coefficients after `ρ → (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`, given the Bloch
    /// rotations `O_A`, `O_B` of the two unitaries: `R → Õ_A R Õ_Bᵀ` with
    /// `Õ = 1 ⊕ O`.
    pub fn rotated(&self, oa: &Matrix3<f64>, ob: &Matrix3<f64>) -> RMatrix {
        let r = Matrix4::from_fn(|i, j| self.entries[i][j]);
        let out = embed(oa) * r * embed(ob).transpose();
        RMatrix {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| out[(i, j)])),
        }
    }

    pub fn is_canonical_form(&self, tol: f64) -> bool {
        is_canonical_form(self, tol)
    }
}

fn embed(o: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(o);
    m
}

/// `R_μν = Tr(ρ σ_μ ⊗ σ_ν)`.
pub fn r_matrix(rho: &DensityMatrix) -> Result<RMatrix> {
    RMatrix::from_rho(rho)
}

/// Bloch-sphere rotation `O_ij = ½ Tr(σ_i U σ_j U†)` of a single-qubit unitary.
pub fn bloch_rotation(u: &DMatrix<C64>) -> Matrix3<f64> {
    let paulis = [Pauli::X.matrix(), Pauli::Y.matrix(), Pauli::Z.matrix()];
    let ud = u.adjoint();
    let conj: Vec<DMatrix<C64>> = paulis.iter().map(|s| u * s * &ud).collect();
    Matrix3::from_fn(|i, j| 0.5 * (&paulis[i] * &conj[j]).trace().re)
}

fn at_most_one_component(v: [f64; 3], tol: f64) -> bool {
    v.iter().filter(|x| x.abs() > tol).count() <= 1
}

/// Both Bloch vectors lie along a coordinate axis (or vanish) and the
/// correlation block is diagonal.
pub fn is_canonical_form(r: &RMatrix, tol: f64) -> bool {
    let t = r.correlation();
    let off_diagonal_ok = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .all(|(i, j)| t[i][j].abs() < tol);
    off_diagonal_ok
        && at_most_one_component(r.bloch_a(), tol)
        && at_most_one_component(r.bloch_b(), tol)
}
