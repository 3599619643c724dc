use nalgebra::DMatrix;
use nonlocal_magic::magic::{
    mutual_sre_mixed, nn_two_qubit_pure_analytic, sre2_mixed, sre2_pure, NN_MAX_TWO_QUBIT,
};
use nonlocal_magic::optim::{nn_optimize, nn_optimize_state, OptimizerConfig};
use nonlocal_magic::qcore::{
    gates, haar_state_seeded, haar_unitary_seeded, log_negativity, partial_trace, schmidt_spectrum,
    von_neumann_entropy, DensityMatrix, StateVector, C64,
};
use nonlocal_magic::rom::{enumerate_stabilizer_states, solve_l1_lp};
use proptest::prelude::*;

fn clifford_generators() -> Vec<DMatrix<C64>> {
    vec![
        gates::h(),
        gates::s(),
        gates::s_dagger(),
        gates::x(),
        gates::z(),
    ]
}

fn opt() -> OptimizerConfig {
    OptimizerConfig::default().with_starts(16).with_seed(3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_spectrum_is_local_unitary_invariant(s in 0u64..1_000_000, a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let psi = haar_state_seeded(2, s).unwrap();
        let ua = haar_unitary_seeded(2, a).unwrap();
        let ub = haar_unitary_seeded(2, b).unwrap();
        let moved = psi.apply_local(&[ua, ub]).unwrap();
        let t0 = schmidt_spectrum(&psi).unwrap().theta();
        let t1 = schmidt_spectrum(&moved).unwrap().theta();
        prop_assert!((t0 - t1).abs() < 1e-9);
        let n0 = nn_two_qubit_pure_analytic(&psi).unwrap();
        prop_assert!((n0 - nn_two_qubit_pure_analytic(&moved).unwrap()).abs() < 1e-9);
        prop_assert!((0.0..=NN_MAX_TWO_QUBIT + 1e-12).contains(&n0));
    }

    #[test]
    fn marginal_entropies_agree(s in 0u64..1_000_000) {
        let psi = haar_state_seeded(2, s).unwrap();
        let a = von_neumann_entropy(&partial_trace(&psi, &[0]).unwrap());
        let b = von_neumann_entropy(&partial_trace(&psi, &[1]).unwrap());
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn separable_mixtures_have_zero_negativity(s in 0u64..1_000_000, k in 1usize..5) {
        let parts: Vec<(f64, DensityMatrix)> = (0..k as u64).map(|i| {
            let a = haar_state_seeded(1, s * 16 + 2 * i).unwrap();
            let b = haar_state_seeded(1, s * 16 + 2 * i + 1).unwrap();
            (1.0 / k as f64, DensityMatrix::from_pure(&a.tensor(&b)).unwrap())
        }).collect();
        let rho = DensityMatrix::mixture(&parts).unwrap();
        prop_assert!(log_negativity(&rho).unwrap().abs() < 1e-8);
    }

    #[test]
    fn partial_traces_have_unit_trace(s in 0u64..1_000_000, q in 0usize..4, r in 0usize..4) {
        prop_assume!(q != r);
        let psi = haar_state_seeded(4, s).unwrap();
        let rho = partial_trace(&psi, &[q, r]).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn clifford_gates_preserve_sre(s in 0u64..1_000_000, picks in prop::collection::vec((0usize..5, 0usize..3), 1..8), cnots in prop::collection::vec((0usize..3, 1usize..3), 0..4)) {
        let psi = haar_state_seeded(3, s).unwrap();
        let gens = clifford_generators();
        let mut moved = psi.clone();
        for (g, q) in picks {
            moved = moved.apply_gate(&gens[g], &[q]).unwrap();
        }
        for (c, d) in cnots {
            let t = (c + d) % 3;
            moved = moved.apply_gate(&gates::cnot(), &[c, t]).unwrap();
        }
        prop_assert!((sre2_pure(&psi) - sre2_pure(&moved)).abs() < 1e-9);
    }

    #[test]
    fn sre_is_additive(a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let x = haar_state_seeded(2, a).unwrap();
        let y = haar_state_seeded(1, b).unwrap();
        prop_assert!((sre2_pure(&x.tensor(&y)) - sre2_pure(&x) - sre2_pure(&y)).abs() < 1e-9);
    }

    #[test]
    fn werner_sre_equals_mutual_sre(x in 0.0f64..=1.0) {
        let rho = DensityMatrix::werner(x).unwrap();
        prop_assert!((sre2_mixed(&rho) - mutual_sre_mixed(&rho).unwrap()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn nn_never_exceeds_sre(s in 0u64..1_000_000, mix in 0.0f64..1.0) {
        let psi = haar_state_seeded(2, s).unwrap();
        let rho = DensityMatrix::mixture(&[
            (1.0 - mix, DensityMatrix::from_pure(&psi).unwrap()),
            (mix, DensityMatrix::maximally_mixed(2).unwrap()),
        ]).unwrap();
        let nn = nn_optimize(&rho, &opt()).unwrap().value;
        prop_assert!(nn >= 0.0);
        prop_assert!(nn <= sre2_mixed(&rho) + 1e-9);
    }

    #[test]
    fn optimised_nn_is_local_unitary_invariant(s in 0u64..1_000_000, a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let psi = haar_state_seeded(2, s).unwrap();
        let moved = psi
            .apply_local(&[haar_unitary_seeded(2, a).unwrap(), haar_unitary_seeded(2, b).unwrap()])
            .unwrap();
        let n0 = nn_optimize_state(&psi, &opt()).unwrap().value;
        let n1 = nn_optimize_state(&moved, &opt()).unwrap().value;
        prop_assert!((n0 - n1).abs() < 1e-5, "{n0} vs {n1}");
    }

    #[test]
    fn rom_is_permutation_invariant(s in 0u64..1_000_000, perm_seed in 0u64..24) {
        let psi = haar_state_seeded(2, s).unwrap();
        let target = nonlocal_magic::magic::pauli_expectations(&psi);
        let basis = enumerate_stabilizer_states(2).unwrap();
        let mut perm: Vec<usize> = (0..basis.len()).collect();
        let mut k = perm_seed as usize + 1;
        for i in (1..perm.len()).rev() {
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (k >> 33) % (i + 1));
        }
        let a = solve_l1_lp(&target, &basis).unwrap().rom;
        let b = solve_l1_lp(&target, &basis.permuted(&perm).unwrap()).unwrap().rom;
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn stabilizer_mixtures_have_zero_rom(w in prop::collection::vec(0.01f64..1.0, 4), picks in prop::collection::vec(0usize..60, 4)) {
        let basis = enumerate_stabilizer_states(2).unwrap();
        let total: f64 = w.iter().sum();
        let mut target = vec![0.0; 16];
        for (wi, &p) in w.iter().zip(&picks) {
            for (t, v) in target.iter_mut().zip(&basis.states()[p]) {
                *t += wi / total * v;
            }
        }
        prop_assert!(solve_l1_lp(&target, &basis).unwrap().rom.abs() < 1e-8);
    }
}

#[test]
fn bell_with_t_gate_keeps_nn_but_not_sre() {
    let bell = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
    let tb = bell.apply_gate(&gates::t(), &[0]).unwrap();
    assert!(sre2_pure(&tb) > 0.1);
    assert!(nn_two_qubit_pure_analytic(&tb).unwrap().abs() < 1e-12);
    assert!(nn_optimize_state(&tb, &opt()).unwrap().value < 1e-6);
}
