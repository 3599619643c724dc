use nalgebra::{DMatrix, SymmetricEigen};

use crate::qcore::{StateVector, C64};
use crate::{Error, Result};

/// Largest chain handled by exact diagonalisation.
pub const ED_MAX_SITES: usize = 16;

const KRYLOV_DIM: usize = 80;
const MAX_RESTARTS: usize = 40;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub state: StateVector,
    pub energy: f64,
    /// Total Lanczos steps over all restarts.
    pub iterations: usize,
    /// `‖Hψ − Eψ‖` of the returned vector.
    pub residual: f64,
}

/// `H = −Σ σˣ_i σˣ_{i+1} − h Σ σᶻ_i` with periodic wrap, applied matrix-free.
struct Hamiltonian {
    bonds: Vec<usize>,
    diagonal: Vec<f64>,
}

impl Hamiltonian {
    fn new(l: usize, h: f64) -> Self {
        let bit = |q: usize| 1usize << (l - 1 - q);
        let bonds = (0..l).map(|i| bit(i) | bit((i + 1) % l)).collect();
        let diagonal = (0..1usize << l)
            .map(|s| {
                let up = l as f64 - 2.0 * s.count_ones() as f64;
                -h * up
            })
            .collect();
        Self { bonds, diagonal }
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (s, o) in out.iter_mut().enumerate() {
            let hop: f64 = self.bonds.iter().map(|&b| v[s ^ b]).sum();
            *o = self.diagonal[s] * v[s] - hop;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    n
}

/// Ground state in the even sector of `Πσᶻ` by restarted Lanczos.
///
/// The sector is fixed by the start vector: `H` never changes the number
/// of down spins by an odd amount, so odd-parity amplitudes stay zero.
pub fn ground_state_lanczos(l: usize, h: f64) -> Result<GroundState> {
    if !(2..=ED_MAX_SITES).contains(&l) {
        return Err(Error::UnsupportedSize(format!(
            "exact diagonalisation supports 2..={ED_MAX_SITES} sites, got {l}"
        )));
    }
    let dim = 1usize << l;
    let ham = Hamiltonian::new(l, h);
    let mut x: Vec<f64> = (0..dim)
        .map(|s| if s.count_ones() % 2 == 0 { 1.0 } else { 0.0 })
        .collect();
    normalize(&mut x);
    let krylov = KRYLOV_DIM.min(dim / 2);
    let mut total = 0;
    let mut w = vec![0.0; dim];

    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for j in 0..krylov {
            ham.apply(&basis[j], &mut w);
            total += 1;
            let a = dot(&basis[j], &w);
            alpha.push(a);
            // full reorthogonalisation, twice for stability
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let b = dot(&w, &w).sqrt();
            if j + 1 == krylov || b < 1e-13 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }
        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let lowest = (0..k)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .unwrap_or(0);
        let energy = eig.eigenvalues[lowest];
        let coeffs = eig.eigenvectors.column(lowest);
        x = vec![0.0; dim];
        for (c, v) in coeffs.iter().zip(&basis) {
            axpy(*c, v, &mut x);
        }
        normalize(&mut x);

        ham.apply(&x, &mut w);
        let e = dot(&x, &w);
        axpy(-e, &x, &mut w);
        let residual = dot(&w, &w).sqrt();
        if residual < RESIDUAL_TOL * energy.abs().max(1.0) {
            // fix the global sign so the largest amplitude is positive
            let pivot = x
                .iter()
                .copied()
                .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
            let sign = pivot.signum();
            let amps = x.iter().map(|v| C64::new(sign * v, 0.0)).collect();
            return Ok(GroundState {
                state: StateVector::normalized(amps)?,
                energy: e,
                iterations: total,
                residual,
            });
        }
    }
    Err(Error::Solver(format!(
        "Lanczos did not converge after {MAX_RESTARTS} restarts (L={l}, h={h})"
    )))
}
