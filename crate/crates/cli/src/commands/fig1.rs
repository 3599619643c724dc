use std::f64::consts::FRAC_PI_2;

use nonlocal_magic::magic::{
    haar_nn_bin_probabilities, haar_nn_mean, mutual_sre, nn_two_qubit_pure_analytic, sre2_mixed,
    sre2_pure, NN_MAX_TWO_QUBIT,
};
use nonlocal_magic::optim::{nn_optimize, OptimizerConfig};
use nonlocal_magic::qcore::{
    gates, haar_random_state, log_negativity, DensityMatrix, SchmidtSpectrum,
};
use nonlocal_magic::scan::RunningStats;
use nonlocal_magic::{seed, StateVector};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{references, Reference};
use crate::config::{Fig1Config, ResolvedConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::Report;

#[derive(Debug, Clone, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub nn: f64,
    pub entropy: f64,
    pub mutual_sre: f64,
    pub sre: f64,
    pub sre_t_gate: f64,
    pub nn_t_gate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
    pub sampled_density: f64,
    pub analytic_probability: f64,
    pub analytic_density: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WernerRow {
    pub x: f64,
    pub nn: f64,
    pub sre: f64,
    pub log_negativity: f64,
    pub sre_t_gate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HaarSummary {
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
    pub analytic_mean: f64,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub references: Vec<Reference>,
}

const PANEL_C: u64 = 0xC;
const PANEL_D: u64 = 0xD;

fn t_on_first() -> nalgebra::DMatrix<nonlocal_magic::C64> {
    gates::kron(&gates::t(), &gates::identity(2))
}

pub fn theta_sweep(points: usize) -> CliResult<Vec<ThetaRow>> {
    let t = t_on_first();
    (0..points)
        .map(|i| {
            let theta = FRAC_PI_2 * i as f64 / (points - 1) as f64;
            let psi = StateVector::schmidt_form(theta);
            let tpsi = psi.apply_gate(&t, &[0, 1])?;
            Ok(ThetaRow {
                theta,
                nn: nn_two_qubit_pure_analytic(&psi)?,
                entropy: SchmidtSpectrum::from_theta(theta).entropy(),
                mutual_sre: mutual_sre(&psi)?,
                sre: sre2_pure(&psi),
                sre_t_gate: sre2_pure(&tpsi),
                nn_t_gate: nn_two_qubit_pure_analytic(&tpsi)?,
            })
        })
        .collect()
}

/// NN of Haar-random two-qubit states, one ChaCha stream per sample.
pub fn haar_samples(seed_base: u64, n: usize) -> CliResult<Vec<f64>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let s = haar_random_state(2, &mut seed::rng(seed_base, &[PANEL_C, i]))?;
            Ok(nn_two_qubit_pure_analytic(&s)?)
        })
        .collect()
}

/// Histogram against the analytic distribution, with a Pearson test over
/// bins merged until every expected count reaches 5.
pub fn histogram(samples: &[f64], bins: usize) -> (Vec<HistogramRow>, f64, usize, f64) {
    let width = NN_MAX_TWO_QUBIT / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 * width).collect();
    let probs = haar_nn_bin_probabilities(&edges);
    let mut counts = vec![0usize; bins];
    for &y in samples {
        let k = ((y / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = samples.len() as f64;
    let rows = (0..bins)
        .map(|k| HistogramRow {
            bin_lo: edges[k],
            bin_hi: edges[k + 1],
            count: counts[k],
            sampled_density: counts[k] as f64 / n / width,
            analytic_probability: probs[k],
            analytic_density: probs[k] / width,
        })
        .collect();
    let mut chi2 = 0.0;
    let mut groups = 0;
    let (mut o, mut e) = (0.0, 0.0);
    for k in 0..bins {
        o += counts[k] as f64;
        e += probs[k] * n;
        if e >= 5.0 || k == bins - 1 {
            chi2 += (o - e) * (o - e) / e.max(f64::MIN_POSITIVE);
            groups += 1;
            (o, e) = (0.0, 0.0);
        }
    }
    let dof = groups.max(2) - 1;
    let p = 1.0
        - ChiSquared::new(dof as f64)
            .map(|d| d.cdf(chi2))
            .unwrap_or(1.0);
    (rows, chi2, dof, p)
}

pub fn werner_sweep(points: usize, starts: usize, seed_base: u64) -> CliResult<Vec<WernerRow>> {
    let t = t_on_first();
    (0..points)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / (points - 1) as f64;
            let rho = DensityMatrix::werner(x)?;
            let cfg = OptimizerConfig::default()
                .with_starts(starts)
                .with_seed(seed::derive(seed_base, &[PANEL_D, i as u64]));
            Ok(WernerRow {
                x,
                nn: nn_optimize(&rho, &cfg)?.value,
                sre: sre2_mixed(&rho),
                log_negativity: log_negativity(&rho)?,
                sre_t_gate: sre2_mixed(&rho.conjugate(&t)?),
            })
        })
        .collect()
}

pub fn run(c: &Fig1Config, run: &ResolvedConfig, out: &mut OutputDir) -> CliResult<Report> {
    if c.theta_points < 2
        || c.werner_points < 2
        || c.bins < 2
        || c.haar_samples == 0
        || c.nn_starts == 0
    {
        return Err(CliError::Usage(
            "fig1 needs at least 2 points and bins, 1 sample and 1 start".into(),
        ));
    }
    out.write_csv("fig1_panel_b.csv", &theta_sweep(c.theta_points)?)?;

    let samples = haar_samples(run.seed, c.haar_samples)?;
    let stats: RunningStats = samples.iter().copied().collect();
    let (rows, chi2, dof, p_value) = histogram(&samples, c.bins);
    out.write_csv("fig1_panel_c.csv", &rows)?;
    let summary = HaarSummary {
        samples: samples.len(),
        mean: stats.mean(),
        stderr: stats.stderr(),
        analytic_mean: haar_nn_mean(),
        chi2,
        dof,
        p_value,
        references: if run.paper_targets {
            references(&["haar_mean_nn", "max_two_qubit_nn"])
        } else {
            Vec::new()
        },
    };
    out.write_json("fig1_panel_c_summary.json", &summary)?;

    out.write_csv(
        "fig1_panel_d.csv",
        &werner_sweep(c.werner_points, c.nn_starts, run.seed)?,
    )?;
    Ok(Report {
        lines: vec![format!(
            "haar mean NN {:.5} ± {:.5} (analytic {:.5}), chi2 p = {:.3}",
            summary.mean, summary.stderr, summary.analytic_mean, p_value
        )],
        ..Report::default()
    })
}
