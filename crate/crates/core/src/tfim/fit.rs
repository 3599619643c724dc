//! Power-law and exponential fits with an optional constant offset.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const OFFSET_GRID: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub r_min: f64,
    pub r_max: f64,
}

impl FitWindow {
    pub fn new(r_min: f64, r_max: f64) -> Self {
        Self { r_min, r_max }
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min && r <= self.r_max
    }
}

/// `y ≈ a·r^{−α} + c`, or `y ≈ a·e^{−r/ξ} + c` for [`fit_exponential`]
/// (where `exponent` holds `1/ξ`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub amplitude: f64,
    pub exponent: f64,
    pub offset: f64,
    /// Standard error of the exponent from the log-space regression.
    pub exponent_stderr: f64,
    /// `‖y − model‖₂` over the window.
    pub residual_norm: f64,
    pub window: FitWindow,
    pub n_points: usize,
}

impl FitResult {
    pub fn power_law(&self, r: f64) -> f64 {
        self.amplitude * r.powf(-self.exponent) + self.offset
    }

    pub fn exponential(&self, r: f64) -> f64 {
        self.amplitude * (-self.exponent * r).exp() + self.offset
    }
}

struct LineFit {
    intercept: f64,
    slope: f64,
    slope_stderr: f64,
}

fn regress(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = if xs.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LineFit {
        intercept,
        slope,
        slope_stderr,
    }
}

#[derive(Clone, Copy)]
enum Model {
    Power,
    Exponential,
}

impl Model {
    fn abscissa(self, r: f64) -> f64 {
        match self {
            Model::Power => r.ln(),
            Model::Exponential => r,
        }
    }
}

fn fit_at_offset(rs: &[f64], ys: &[f64], c: f64, model: Model) -> Option<(LineFit, f64)> {
    if ys.iter().any(|&y| y - c <= 0.0) {
        return None;
    }
    let xs: Vec<f64> = rs.iter().map(|&r| model.abscissa(r)).collect();
    let ls: Vec<f64> = ys.iter().map(|&y| (y - c).ln()).collect();
    let line = regress(&xs, &ls);
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - c - (line.intercept + line.slope * x).exp()).powi(2))
        .sum();
    Some((line, sse))
}

fn fit(
    points: &[(f64, f64)],
    window: FitWindow,
    with_offset: bool,
    model: Model,
) -> Result<FitResult> {
    let (rs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .copied()
        .filter(|&(r, y)| window.contains(r) && r.is_finite() && y.is_finite())
        .unzip();
    if rs.len() < 4 {
        return Err(Error::Fit(format!(
            "{} points in window [{}, {}], need at least 4",
            rs.len(),
            window.r_min,
            window.r_max
        )));
    }
    if matches!(model, Model::Power) && rs.iter().any(|&r| r <= 0.0) {
        return Err(Error::Fit("power-law abscissa must be positive".into()));
    }
    let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let y_max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let offset = if with_offset {
        let span = (y_max - y_min).max(f64::MIN_POSITIVE);
        let scale = y_max.abs().max(y_min.abs()).max(span);
        // Parametrise c = y_min − e^t: scan t on a grid, then refine the best
        // bracket by golden-section search.
        let sse = |t: f64| {
            fit_at_offset(&rs, &ys, y_min - t.exp(), model).map_or(f64::INFINITY, |(_, s)| s)
        };
        let (t_lo, t_hi) = ((1e-13 * scale).ln(), (10.0 * span).ln());
        let grid: Vec<f64> = (0..=OFFSET_GRID)
            .map(|i| t_lo + (t_hi - t_lo) * i as f64 / OFFSET_GRID as f64)
            .collect();
        let best = (0..grid.len())
            .min_by(|&a, &b| sse(grid[a]).total_cmp(&sse(grid[b])))
            .unwrap_or(0);
        let mut lo = grid[best.saturating_sub(1)];
        let mut hi = grid[(best + 1).min(OFFSET_GRID)];
        let mut a = hi - GOLDEN * (hi - lo);
        let mut b = lo + GOLDEN * (hi - lo);
        let (mut fa, mut fb) = (sse(a), sse(b));
        while hi - lo > 1e-12 {
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - GOLDEN * (hi - lo);
                fa = sse(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + GOLDEN * (hi - lo);
                fb = sse(b);
            }
        }
        let t = 0.5 * (lo + hi);
        let t = if sse(t) <= sse(grid[best]) {
            t
        } else {
            grid[best]
        };
        y_min - t.exp()
    } else {
        if y_min <= 0.0 {
            return Err(Error::Fit("non-positive values without offset".into()));
        }
        0.0
    };
    let (line, sse) = fit_at_offset(&rs, &ys, offset, model)
        .ok_or_else(|| Error::Fit("non-positive values after offset subtraction".into()))?;
    Ok(FitResult {
        amplitude: line.intercept.exp(),
        exponent: -line.slope,
        offset,
        exponent_stderr: line.slope_stderr,
        residual_norm: sse.sqrt(),
        window,
        n_points: rs.len(),
    })
}

/// Least-squares `y = a·r^{−α} + c`: one-dimensional search over `c` around
/// a linear regression of `ln(y − c)` on `ln r`.
pub fn fit_power_law(
    points: &[(f64, f64)],
    window: FitWindow,
    with_offset: bool,
) -> Result<FitResult> {
    fit(points, window, with_offset, Model::Power)
}

/// As [`fit_power_law`] for `y = a·e^{−κr} + c`.
pub fn fit_exponential(
    points: &[(f64, f64)],
    window: FitWindow,
    with_offset: bool,
) -> Result<FitResult> {
    fit(points, window, with_offset, Model::Exponential)
}

/// Log-log slope magnitude between the window ends after removing `offset`.
pub fn effective_exponent(points: &[(f64, f64)], window: FitWindow, offset: f64) -> Option<f64> {
    let inside: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(r, _)| window.contains(r))
        .collect();
    let (r1, y1) = *inside.first()?;
    let (r2, y2) = *inside.last()?;
    let (d1, d2) = (y1 - offset, y2 - offset);
    if d1 <= 0.0 || d2 <= 0.0 || r2 <= r1 {
        return None;
    }
    Some(-(d2 / d1).ln() / (r2 / r1).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn synth(a: f64, alpha: f64, c: f64) -> Vec<(f64, f64)> {
        (2..=64)
            .map(|r| (r as f64, a * (r as f64).powf(-alpha) + c))
            .collect()
    }

    #[test]
    fn exact_with_offset() {
        let f = fit_power_law(&synth(2.0, 0.5, 0.1), FitWindow::new(2.0, 64.0), true).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-6, "{f:?}");
        assert!((f.offset - 0.1).abs() < 1e-6);
        assert!((f.amplitude - 2.0).abs() < 1e-5);
    }

    #[test]
    fn exact_without_offset() {
        let f = fit_power_law(&synth(3.0, 1.7, 0.0), FitWindow::new(2.0, 64.0), false).unwrap();
        assert!((f.exponent - 1.7).abs() < 1e-12);
        assert!((f.amplitude - 3.0).abs() < 1e-10);
        assert!(f.residual_norm < 1e-12);
    }

    #[test]
    fn noisy_data() {
        let mut rng = seed::rng(5, &[]);
        let pts: Vec<(f64, f64)> = synth(2.0, 0.5, 0.0)
            .into_iter()
            .map(|(r, y)| {
                let n: f64 = rng.sample(StandardNormal);
                (r, y * (1.0 + 0.01 * n))
            })
            .collect();
        let f = fit_power_law(&pts, FitWindow::new(2.0, 64.0), false).unwrap();
        assert!((f.exponent - 0.5).abs() < 0.05);
        assert!(f.exponent_stderr > 0.0);
    }

    #[test]
    fn exponential_recovery() {
        let pts: Vec<(f64, f64)> = (1..=12)
            .map(|r| (r as f64, 0.7 * (-0.9 * r as f64).exp() + 0.05))
            .collect();
        let f = fit_exponential(&pts, FitWindow::new(1.0, 12.0), true).unwrap();
        assert!(
            (f.exponent - 0.9).abs() < 1e-5 && (f.offset - 0.05).abs() < 1e-7,
            "{f:?}"
        );
    }

    #[test]
    fn errors() {
        let few = synth(1.0, 1.0, 0.0);
        assert!(matches!(
            fit_power_law(&few, FitWindow::new(2.0, 4.0), false),
            Err(Error::Fit(_))
        ));
        let neg: Vec<(f64, f64)> = (1..10).map(|r| (r as f64, -1.0)).collect();
        assert!(fit_power_law(&neg, FitWindow::new(1.0, 10.0), false).is_err());
    }

    #[test]
    fn effective_exponent_of_pure_power() {
        let e = effective_exponent(&synth(1.0, 2.5, 0.3), FitWindow::new(4.0, 32.0), 0.3).unwrap();
        assert!((e - 2.5).abs() < 1e-9);
    }
}
