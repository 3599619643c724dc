use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{StateVector, C64};
use crate::{seed, Error, Result};

/// Haar-distributed unitary of size `dim` (a power of two).
///
/// QR of a complex Ginibre matrix with each column of `Q` rephased by
/// `R_jj / |R_jj|`, which removes the bias of the bare decomposition.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DMatrix<C64>> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Argument(format!(
            "dimension {dim} is not a power of two >= 2"
        )));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    });
    let (mut q, r) = z.qr().unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// First column of a Haar unitary, i.e. a Haar-random pure state.
pub fn haar_random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    if n_qubits == 0 || n_qubits > 16 {
        return Err(Error::Argument(format!("{n_qubits} qubits")));
    }
    let u = haar_random_unitary(1 << n_qubits, rng)?;
    StateVector::normalized(u.column(0).iter().copied().collect())
}

pub fn haar_unitary_seeded(dim: usize, seed: u64) -> Result<DMatrix<C64>> {
    haar_random_unitary(dim, &mut seed::rng(seed, &[]))
}

pub fn haar_state_seeded(n_qubits: usize, seed: u64) -> Result<StateVector> {
    haar_random_state(n_qubits, &mut seed::rng(seed, &[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::unitarity_defect;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(
            haar_unitary_seeded(4, 11).unwrap(),
            haar_unitary_seeded(4, 11).unwrap()
        );
        assert_ne!(
            haar_unitary_seeded(4, 11).unwrap(),
            haar_unitary_seeded(4, 12).unwrap()
        );
        assert_eq!(
            haar_state_seeded(3, 5).unwrap(),
            haar_state_seeded(3, 5).unwrap()
        );
    }

    #[test]
    fn samples_are_unitary() {
        let mut rng = seed::rng(1, &[]);
        for dim in [2, 4, 8] {
            let u = haar_random_unitary(dim, &mut rng).unwrap();
            assert!(unitarity_defect(&u) < 1e-12);
            for col in u.column_iter() {
                assert!((col.norm() - 1.0).abs() < 1e-10);
            }
        }
        assert!(haar_random_unitary(3, &mut rng).is_err());
    }

    #[test]
    fn first_moment_matches_haar() {
        // E|U_00|² = 1/d; Monte-Carlo mean within 3 standard errors.
        let mut rng = seed::rng(2024, &[]);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| haar_random_unitary(4, &mut rng).unwrap()[(0, 0)].norm_sqr())
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn phases_are_unbiased() {
        // Without the phase fix the diagonal of Q is biased towards the
        // positive real axis; the fixed sampler has E[U_00] = 0.
        let mut rng = seed::rng(77, &[]);
        let n = 20_000;
        let mean: C64 = (0..n)
            .map(|_| haar_random_unitary(2, &mut rng).unwrap()[(0, 0)])
            .sum::<C64>()
            / n as f64;
        assert!(mean.norm() < 0.02, "{mean}");
    }
}
