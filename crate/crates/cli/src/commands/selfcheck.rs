use nalgebra::{DMatrix, DVector};
use nonlocal_magic::magic::{
    haar_nn_mean, mutual_sre_mixed, nn_two_qubit_pure_analytic, pauli_expectations_rho, sre2_mixed,
};
use nonlocal_magic::optim::{nn_optimize_state, OptimizerConfig};
use nonlocal_magic::qcore::{haar_state_seeded, DensityMatrix};
use nonlocal_magic::rom::{enumerate_stabilizer_states, solve_l1_lp};
use nonlocal_magic::scan::RunningStats;
use nonlocal_magic::seed;
use nonlocal_magic::tfim::{
    ground_state_lanczos, minn, two_point_nn_scan, Axis, Backend, MinnMode, TfimConfig,
};
use serde::Serialize;

use super::fig1::haar_samples;
use super::rom::parse_state;
use crate::config::ResolvedConfig;
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::Report;

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfcheckReport {
    pub passed: bool,
    pub oracles: Vec<OracleResult>,
}

fn oracle(name: &'static str, f: impl FnOnce() -> CliResult<(bool, String)>) -> OracleResult {
    match f() {
        Ok((passed, detail)) => OracleResult {
            name,
            passed,
            detail,
        },
        Err(e) => OracleResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Minimum L1 norm over every invertible square subsystem of the
/// stabilizer decomposition of a single-qubit Pauli vector. Vertices of the
/// feasible polytope are basic solutions, so this equals the LP optimum.
pub fn brute_force_l1(target: &[f64]) -> CliResult<f64> {
    let basis = enumerate_stabilizer_states(1)?;
    let states = basis.states();
    let m = target.len();
    let b = DVector::from_column_slice(target);
    let mut best = f64::INFINITY;
    let k = states.len();
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let cols: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let a = DMatrix::from_fn(m, m, |i, j| states[cols[j]][i]);
        if a.determinant().abs() < 1e-12 {
            continue;
        }
        if let Some(x) = a.lu().solve(&b) {
            best = best.min(x.iter().map(|v| v.abs()).sum());
        }
    }
    Ok(best)
}

pub fn optimizer_vs_theorem(seed_base: u64, n: usize, starts: usize) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..n as u64 {
        let s = haar_state_seeded(2, seed::derive(seed_base, &[i]))?;
        let cfg = OptimizerConfig::default()
            .with_starts(starts)
            .with_seed(seed::derive(seed_base, &[i, 1]));
        let opt = nn_optimize_state(&s, &cfg)?.value;
        worst = worst.max((opt - nn_two_qubit_pure_analytic(&s)?).abs());
    }
    Ok(worst)
}

pub fn ed_vs_free_fermion(l: usize, fields: &[f64]) -> CliResult<f64> {
    let sites: Vec<usize> = (2..=l).collect();
    let mut worst: f64 = 0.0;
    for &h in fields {
        let ed = two_point_nn_scan(&TfimConfig::new(l, h, Backend::Ed)?, &sites)?;
        let ff = two_point_nn_scan(&TfimConfig::new(l, h, Backend::FreeFermion)?, &sites)?;
        for (a, b) in ed.iter().zip(&ff) {
            worst = worst.max((a.value - b.value).abs());
        }
    }
    Ok(worst)
}

/// Largest `|enumerate − sample| / stderr` over the three axes.
pub fn enumerate_vs_sample(
    l: usize,
    h: f64,
    r: usize,
    samples: usize,
    seed_base: u64,
) -> CliResult<f64> {
    let gs = ground_state_lanczos(l, h)?;
    let mut worst: f64 = 0.0;
    for (k, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
        let e = minn(&gs.state, [0, r - 1], axis, MinnMode::Enumerate)?;
        let s = minn(
            &gs.state,
            [0, r - 1],
            axis,
            MinnMode::Sample {
                n_samples: samples,
                seed: seed::derive(seed_base, &[k as u64]),
            },
        )?;
        worst = worst.max((e.value - s.value).abs() / s.stderr.max(1e-15));
    }
    Ok(worst)
}

pub fn run(run: &ResolvedConfig, out: &mut OutputDir) -> CliResult<Report> {
    let seed_base = run.seed;
    let oracles = vec![
        oracle("optimizer-vs-theorem", || {
            let w = optimizer_vs_theorem(seed_base, 10, 30)?;
            Ok((
                w < 1e-5,
                format!("max deviation {w:.2e} over 10 Haar states"),
            ))
        }),
        oracle("ed-vs-free-fermion", || {
            let w = ed_vs_free_fermion(10, &[0.5, 1.0, 2.0])?;
            Ok((w < 1e-6, format!("max deviation {w:.2e} at L = 10")))
        }),
        oracle("lp-vs-brute-force", || {
            let mut worst: f64 = 0.0;
            let basis = enumerate_stabilizer_states(1)?;
            for name in ["t-state"] {
                let e = pauli_expectations_rho(&parse_state(name)?);
                worst = worst.max((solve_l1_lp(&e, &basis)?.l1 - brute_force_l1(&e)?).abs());
            }
            for i in 0..5u64 {
                let s = haar_state_seeded(1, seed::derive(seed_base, &[0x1b, i]))?;
                let e = pauli_expectations_rho(&DensityMatrix::from_pure(&s)?);
                worst = worst.max((solve_l1_lp(&e, &basis)?.l1 - brute_force_l1(&e)?).abs());
            }
            let t = solve_l1_lp(&pauli_expectations_rho(&parse_state("t-state")?), &basis)?.rom;
            let ok = worst < 1e-8 && (t - (2f64.sqrt() - 1.0)).abs() < 1e-6;
            Ok((ok, format!("max LP gap {worst:.2e}; T-state RoM {t:.9}")))
        }),
        oracle("enumerate-vs-sample", || {
            let w = enumerate_vs_sample(8, 1.0, 4, 4000, seed_base)?;
            Ok((w < 4.0, format!("max deviation {w:.2} standard errors")))
        }),
        oracle("haar-mean", || {
            let stats: RunningStats = haar_samples(seed_base, 20_000)?.into_iter().collect();
            let z = (stats.mean() - haar_nn_mean()).abs() / stats.stderr();
            Ok((
                z < 4.0,
                format!(
                    "sampled {:.5}, analytic {:.5}, {z:.2} standard errors",
                    stats.mean(),
                    haar_nn_mean()
                ),
            ))
        }),
        oracle("werner-mutual-sre", || {
            let mut worst: f64 = 0.0;
            for i in 0..=20 {
                let rho = DensityMatrix::werner(i as f64 / 20.0)?;
                worst = worst.max((sre2_mixed(&rho) - mutual_sre_mixed(&rho)?).abs());
            }
            Ok((worst < 1e-9, format!("max deviation {worst:.2e}")))
        }),
    ];
    let passed = oracles.iter().all(|o| o.passed);
    let lines = oracles
        .iter()
        .map(|o| {
            format!(
                "{} {}: {}",
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.detail
            )
        })
        .collect();
    out.write_json("selfcheck.json", &SelfcheckReport { passed, oracles })?;
    Ok(Report {
        selfcheck_failed: !passed,
        lines,
        ..Report::default()
    })
}
