use nonlocal_magic::scan::{series, ScanRecord};
use nonlocal_magic::seed;
use nonlocal_magic::tfim::{
    fit_exponential, fit_power_law, minn_scan, two_point_nn_scan, Axis, Backend, FitResult,
    FitWindow, MinnMode, TfimConfig,
};
use serde::Serialize;

use super::{references, Reference};
use crate::config::{ResolvedConfig, TfimRunConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::Report;

#[derive(Debug, Clone, Serialize)]
pub struct FitEntry {
    pub h: f64,
    pub measure: String,
    pub model: &'static str,
    pub with_offset: bool,
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub window: [f64; 2],
    pub fits: Vec<FitEntry>,
    pub references: Vec<Reference>,
}

pub fn parse_backend(s: &str) -> CliResult<Backend> {
    match s {
        "ed" => Ok(Backend::Ed),
        "free-fermion" => Ok(Backend::FreeFermion),
        _ => Err(CliError::Usage(format!(
            "unknown backend {s:?} (ed or free-fermion)"
        ))),
    }
}

pub fn parse_axis(c: char) -> CliResult<Axis> {
    match c.to_ascii_lowercase() {
        'x' => Ok(Axis::X),
        'y' => Ok(Axis::Y),
        'z' => Ok(Axis::Z),
        _ => Err(CliError::Usage(format!("unknown axis {c:?} (x, y or z)"))),
    }
}

fn fit_series(
    pts: &[(f64, f64)],
    measure: &str,
    h: f64,
    window: FitWindow,
    model: &'static str,
    with_offset: bool,
) -> FitEntry {
    let res = if model == "power_law" {
        fit_power_law(pts, window, with_offset)
    } else {
        fit_exponential(pts, window, with_offset)
    };
    let (fit, error) = match res {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    FitEntry {
        h,
        measure: measure.to_string(),
        model,
        with_offset,
        fit,
        error,
    }
}

fn fit_entries(records: &[ScanRecord], h: f64, window: FitWindow) -> Vec<FitEntry> {
    let mut out = Vec::new();
    let nn = series(records, "nn");
    out.push(fit_series(&nn, "nn", h, window, "power_law", true));
    out.push(fit_series(&nn, "nn", h, window, "exponential", true));
    let xx: Vec<(f64, f64)> = series(records, "xx")
        .into_iter()
        .map(|(r, v)| (r, v.abs()))
        .collect();
    out.push(fit_series(&xx, "xx", h, window, "power_law", false));
    out.push(fit_series(
        &series(records, "mutual_information"),
        "mutual_information",
        h,
        window,
        "power_law",
        false,
    ));
    for axis in ['x', 'y', 'z'] {
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.measure_name == "minn" && r.axis == Some(axis))
            .map(|r| (r.r as f64, r.value))
            .collect();
        if !pts.is_empty() {
            let name = format!("minn_{axis}");
            out.push(fit_series(&pts, &name, h, window, "power_law", true));
            out.push(fit_series(&pts, &name, h, window, "exponential", true));
        }
    }
    out
}

pub fn run(c: &TfimRunConfig, run: &ResolvedConfig, out: &mut OutputDir) -> CliResult<Report> {
    let backend = parse_backend(&c.backend)?;
    let axes: Vec<Axis> = c
        .axes
        .iter()
        .map(|&a| parse_axis(a))
        .collect::<CliResult<_>>()?;
    let mode = match c.mode.as_str() {
        "enumerate" => MinnMode::Enumerate,
        "sample" => MinnMode::Sample {
            n_samples: c.samples,
            seed: run.seed,
        },
        m => {
            return Err(CliError::Usage(format!(
                "unknown mode {m:?} (enumerate or sample)"
            )))
        }
    };
    if !axes.is_empty() && backend != Backend::Ed {
        return Err(CliError::Usage(
            "MINN needs the full ground state (--backend ed)".into(),
        ));
    }
    if c.h.is_empty() {
        return Err(CliError::Usage("at least one field h is required".into()));
    }
    let r_max = c.r_max.unwrap_or(c.l / 2 + 1);
    if c.r_min < 2 || r_max < c.r_min || r_max > c.l {
        return Err(CliError::Usage(format!(
            "site range {}..={r_max} outside 2..={}",
            c.r_min, c.l
        )));
    }
    let sites: Vec<usize> = (c.r_min..=r_max).collect();
    for &h in &c.h {
        TfimConfig::new(c.l, h, backend)?;
    }

    let fit_window = c.fit_window.unwrap_or([4.0, (c.l / 4) as f64]);
    let window = FitWindow::new(fit_window[0], fit_window[1]);
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut report = Report::default();
    for (hi, &h) in c.h.iter().enumerate() {
        let cfg = TfimConfig::new(c.l, h, backend)?;
        let mut recs = match two_point_nn_scan(&cfg, &sites) {
            Ok(r) => r,
            Err(e) => {
                report.failures.push(format!("h = {h}: {e}"));
                continue;
            }
        };
        for (ai, &axis) in axes.iter().enumerate() {
            let m = match mode {
                MinnMode::Sample { n_samples, .. } => MinnMode::Sample {
                    n_samples,
                    seed: seed::derive(run.seed, &[hi as u64, ai as u64]),
                },
                m => m,
            };
            match minn_scan(&cfg, &sites, axis, m) {
                Ok(r) => recs.extend(r),
                Err(e) => report
                    .failures
                    .push(format!("h = {h}, axis {}: {e}", axis.label())),
            }
        }
        fits.extend(fit_entries(&recs, h, window));
        rows.extend(recs);
    }
    out.write_csv("tfim_scan.csv", &rows)?;
    for f in fits
        .iter()
        .filter(|f| f.measure == "nn" && f.model == "power_law")
    {
        if let Some(fit) = &f.fit {
            report.lines.push(format!(
                "h = {}: NN power-law exponent {:.4} on {fit_window:?}",
                f.h, fit.exponent
            ));
        }
    }
    let fit_report = FitReport {
        window: fit_window,
        fits,
        references: if run.paper_targets {
            references(&["critical_nn_exponent"])
        } else {
            Vec::new()
        },
    };
    out.write_json("tfim_fits.json", &fit_report)?;
    Ok(report)
}
