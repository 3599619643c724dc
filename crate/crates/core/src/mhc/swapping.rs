use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::seed;
use crate::tfim::{fit_power_law, FitResult, FitWindow};
use crate::Result;

/// Reference exponents of MINN and pre-measurement mutual information at
/// large scale, recorded for side-by-side reporting.
pub const REFERENCE_ALPHA_MINN: f64 = 0.76;
pub const REFERENCE_ALPHA_IE: f64 = 3.31;

const BOOTSTRAP: usize = 400;

/// Exponent comparison between MINN and mutual information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwappingReport {
    pub alpha_minn: f64,
    pub alpha_minn_err: f64,
    pub alpha_ie: f64,
    pub alpha_ie_err: f64,
    /// `α_MINN / α_IE`.
    pub ratio: f64,
    /// `α_MINN < α_IE / 2` on the point estimates.
    pub swapping: bool,
    /// Whether the swapping verdict survives two combined standard errors.
    pub swapping_significant: bool,
    /// `α_MINN < α_IE` by more than two combined standard errors.
    pub ordering_significant: bool,
    pub minn_fit: Option<FitResult>,
    pub ie_fit: Option<FitResult>,
    /// `"ok"` or `"inconclusive: …"`.
    pub status: String,
    pub reference_alpha_minn: f64,
    pub reference_alpha_ie: f64,
}

/// Exponent and its spread under Gaussian resampling of the inputs.
fn fit_with_error(
    points: &[(f64, f64, f64)],
    window: FitWindow,
    seed_base: u64,
) -> Result<(FitResult, f64)> {
    let central: Vec<(f64, f64)> = points.iter().map(|&(r, y, _)| (r, y)).collect();
    let fit = fit_power_law(&central, window, false)?;
    if points.iter().all(|p| p.2 <= 0.0) {
        let err = fit.exponent_stderr;
        return Ok((fit, err));
    }
    let mut rng = seed::rng(seed_base, &[]);
    let mut samples = Vec::with_capacity(BOOTSTRAP);
    for _ in 0..BOOTSTRAP {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .map(|&(r, y, s)| {
                let z: f64 = rng.sample(StandardNormal);
                (r, y + s * z)
            })
            .collect();
        if let Ok(f) = fit_power_law(&pts, window, false) {
            samples.push(f.exponent);
        }
    }
    if samples.len() < BOOTSTRAP / 2 {
        return Err(crate::Error::Fit(
            "resampled data too often non-positive".into(),
        ));
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    let err = var.sqrt().max(fit.exponent_stderr);
    Ok((fit, err))
}

/// Fits `𝓜̃(r)` and `I_E(r)` (each as `(r, value, stderr)`) with pure power
/// laws on `window` and compares the exponents.
pub fn swapping_diagnostic(
    minn: &[(f64, f64, f64)],
    mutual_information: &[(f64, f64, f64)],
    window: FitWindow,
) -> SwappingReport {
    let a = fit_with_error(minn, window, 1);
    let b = fit_with_error(mutual_information, window, 2);
    let mut report = SwappingReport {
        alpha_minn: f64::NAN,
        alpha_minn_err: f64::NAN,
        alpha_ie: f64::NAN,
        alpha_ie_err: f64::NAN,
        ratio: f64::NAN,
        swapping: false,
        swapping_significant: false,
        ordering_significant: false,
        minn_fit: None,
        ie_fit: None,
        status: String::new(),
        reference_alpha_minn: REFERENCE_ALPHA_MINN,
        reference_alpha_ie: REFERENCE_ALPHA_IE,
    };
    match (a, b) {
        (Ok((fa, ea)), Ok((fb, eb))) => {
            report.alpha_minn = fa.exponent;
            report.alpha_minn_err = ea;
            report.alpha_ie = fb.exponent;
            report.alpha_ie_err = eb;
            report.ratio = fa.exponent / fb.exponent;
            report.swapping = fa.exponent < fb.exponent / 2.0;
            let half_gap = fb.exponent / 2.0 - fa.exponent;
            report.swapping_significant = half_gap > 2.0 * (ea * ea + eb * eb / 4.0).sqrt();
            report.ordering_significant =
                fb.exponent - fa.exponent > 2.0 * (ea * ea + eb * eb).sqrt();
            report.minn_fit = Some(fa);
            report.ie_fit = Some(fb);
            report.status = "ok".into();
        }
        (a, b) => {
            let why: Vec<String> = [a.err(), b.err()]
                .into_iter()
                .flatten()
                .map(|e| e.to_string())
                .collect();
            report.status = format!("inconclusive: {}", why.join("; "));
        }
    }
    report
}
