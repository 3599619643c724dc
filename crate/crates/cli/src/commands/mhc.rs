use nonlocal_magic::mhc::{
    averaged_nn_scan, gap_slope, minn_scan_mhc, swapping_diagnostic, CircuitConfig, EnsembleScan,
    SwappingReport,
};
use nonlocal_magic::optim::OptimizerConfig;
use nonlocal_magic::tfim::FitWindow;
use serde::Serialize;

use super::{references, Reference};
use crate::config::{MhcRunConfig, ResolvedConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::Report;

#[derive(Debug, Clone, Serialize)]
pub struct MhcRow {
    pub backend: String,
    #[serde(rename = "L")]
    pub l: usize,
    pub h: Option<f64>,
    pub r: usize,
    pub axis: Option<char>,
    pub measure_name: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub p: f64,
    pub depth: usize,
    pub n_traj: usize,
    pub n_failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MhcSummary {
    pub swapping: SwappingReport,
    /// Trajectory-mean slope of the post-measurement SRE minus MINN in `r`.
    pub gap_slope: Option<f64>,
    pub gap_slope_stderr: Option<f64>,
    pub references: Vec<Reference>,
}

fn rows(scan: &EnsembleScan, cfg: &CircuitConfig, n_traj: usize) -> Vec<MhcRow> {
    scan.records
        .iter()
        .map(|r| MhcRow {
            backend: r.backend.clone(),
            l: r.l,
            h: None,
            r: r.r,
            axis: Some('z')
                .filter(|_| r.measure_name == "minn" || r.measure_name == "post_measurement_sre"),
            measure_name: r.measure_name.clone(),
            value: r.value,
            stderr: r.stderr,
            n_samples: r.n_samples,
            seed: r.seed,
            p: cfg.p,
            depth: cfg.depth,
            n_traj,
            n_failed: scan.n_failed,
        })
        .collect()
}

/// `(r, value, stderr)` triples of one measure.
pub fn triples(scan: &EnsembleScan, measure: &str) -> Vec<(f64, f64, f64)> {
    scan.records
        .iter()
        .filter(|r| r.measure_name == measure)
        .map(|r| (r.r as f64, r.value, r.stderr.unwrap_or(0.0)))
        .collect()
}

pub fn run(c: &MhcRunConfig, run: &ResolvedConfig, out: &mut OutputDir) -> CliResult<Report> {
    let mut cfg = CircuitConfig::new(c.l, c.p, run.seed)?;
    cfg.measure_every_layer = c.measure_every_layer;
    if let Some(d) = c.depth {
        cfg = cfg.with_depth(d);
    }
    cfg.validate()?;
    let r_max = c.r_max.unwrap_or(c.l / 2 + 1);
    if c.r_min < 2 || r_max < c.r_min || r_max > c.l {
        return Err(CliError::Usage(format!(
            "site range {}..={r_max} outside 2..={}",
            c.r_min, c.l
        )));
    }
    let sites: Vec<usize> = (c.r_min..=r_max).collect();
    let mut report = Report::default();

    let minn = minn_scan_mhc(&cfg, &sites, c.n_traj_minn)?;
    let mut table = rows(&minn, &cfg, c.n_traj_minn);
    if minn.n_failed > 0 {
        report
            .failures
            .push(format!("{} MINN trajectories failed", minn.n_failed));
    }
    if c.dump {
        out.write_jsonl("mhc_minn_trajectories.jsonl", &minn.trajectories)?;
    }
    if !c.skip_nn {
        let opt = OptimizerConfig::default().with_starts(c.nn_starts);
        let nn = averaged_nn_scan(&cfg, &sites, c.n_traj_nn, &opt)?;
        table.extend(rows(&nn, &cfg, c.n_traj_nn));
        if nn.n_failed > 0 {
            report
                .failures
                .push(format!("{} NN trajectories failed", nn.n_failed));
        }
        if c.dump {
            out.write_jsonl("mhc_nn_trajectories.jsonl", &nn.trajectories)?;
        }
    }
    out.write_csv("mhc_scan.csv", &table)?;

    let swapping = swapping_diagnostic(
        &triples(&minn, "minn"),
        &triples(&minn, "mutual_information"),
        FitWindow::new(c.fit_window[0], c.fit_window[1]),
    );
    let gap = gap_slope(&minn.trajectories);
    report.lines.push(format!(
        "alpha_MINN = {:.3} ± {:.3}, alpha_IE = {:.3} ± {:.3} ({})",
        swapping.alpha_minn,
        swapping.alpha_minn_err,
        swapping.alpha_ie,
        swapping.alpha_ie_err,
        swapping.status
    ));
    let summary = MhcSummary {
        swapping,
        gap_slope: gap.map(|g| g.0),
        gap_slope_stderr: gap.map(|g| g.1),
        references: if run.paper_targets {
            references(&["mhc_minn_exponent", "mhc_mutual_information_exponent"])
        } else {
            Vec::new()
        },
    };
    out.write_json("mhc_swapping.json", &summary)?;
    Ok(report)
}
