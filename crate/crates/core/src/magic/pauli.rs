//! Pauli strings and their expectation values.
//!
//! A Pauli string on `n` qubits is indexed by `p = Σ_q μ_q 4^(n-1-q)` with
//! `μ ∈ {0: I, 1: X, 2: Y, 3: Z}`, i.e. lexicographic in `(0, x, y, z)` over
//! tensor positions with qubit 0 leftmost. Every expectation vector in the
//! crate uses this order.

use nalgebra::DMatrix;

use crate::qcore::{gates, DensityMatrix, StateVector, C64};

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(mu: usize) -> Pauli {
        Self::ALL[mu & 3]
    }

    pub fn matrix(self) -> DMatrix<C64> {
        match self {
            Pauli::I => gates::identity(2),
            Pauli::X => gates::x(),
            Pauli::Y => gates::y(),
            Pauli::Z => gates::z(),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Labels of string `index` on `n` qubits, qubit 0 first.
pub fn pauli_labels(index: usize, n: usize) -> Vec<Pauli> {
    (0..n)
        .map(|q| Pauli::from_index(index >> (2 * (n - 1 - q))))
        .collect()
}

/// Dense matrix of Pauli string `index` on `n` qubits.
pub fn pauli_matrix(index: usize, n: usize) -> DMatrix<C64> {
    pauli_labels(index, n)
        .into_iter()
        .fold(DMatrix::identity(1, 1), |acc, p| acc.kronecker(&p.matrix()))
}

/// Splits a string index into amplitude-space flip and phase masks.
pub(crate) fn masks(index: usize, n: usize) -> (usize, usize) {
    let mut x = 0;
    let mut z = 0;
    for q in 0..n {
        let bit = 1 << (n - 1 - q);
        match (index >> (2 * (n - 1 - q))) & 3 {
            1 => x |= bit,
            2 => {
                x |= bit;
                z |= bit;
            }
            3 => z |= bit,
            _ => {}
        }
    }
    (x, z)
}

/// In-place Walsh–Hadamard transform: `w[z] ← Σ_i w[i] (-1)^{|i & z|}`.
fn walsh_hadamard(w: &mut [C64]) {
    let mut h = 1;
    while h < w.len() {
        for block in (0..w.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (w[i], w[i + h]);
                w[i] = a + b;
                w[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `i^k`.
fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Builds all `4^n` values `Tr(ρ P)` from the generator
/// `element(a, b) = ⟨a|ρ|b⟩`.
///
/// For a string with flip mask `x` and phase mask `z`,
/// `P|a⟩ = i^{|x∧z|} (-1)^{|a∧z|} |a⊕x⟩`, so
/// `Tr(ρP) = i^{|x∧z|} Σ_a (-1)^{|a∧z|} ⟨a|ρ|a⊕x⟩`; the inner sum over every
/// `z` at fixed `x` is one Walsh–Hadamard transform.
fn expectations_from<F: Fn(usize, usize) -> C64>(n: usize, element: F) -> Vec<f64> {
    let dim = 1usize << n;
    // transformed[x][z]
    let mut transformed = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for (x, row) in transformed.iter_mut().enumerate() {
        for (a, w) in row.iter_mut().enumerate() {
            *w = element(a, a ^ x);
        }
        walsh_hadamard(row);
    }
    (0..dim * dim)
        .map(|p| {
            let (x, z) = masks(p, n);
            (i_pow((x & z).count_ones()) * transformed[x][z]).re
        })
        .collect()
}

/// `⟨ψ|P|ψ⟩` for every Pauli string, in canonical order.
pub fn pauli_expectations(state: &StateVector) -> Vec<f64> {
    let amps = state.amplitudes();
    expectations_from(state.n_qubits(), |a, b| amps[a] * amps[b].conj())
}

/// `Tr(ρP)` for every Pauli string, in canonical order.
pub fn pauli_expectations_rho(rho: &DensityMatrix) -> Vec<f64> {
    let m = rho.matrix();
    expectations_from(rho.n_qubits(), |a, b| m[(a, b)])
}
