use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Settings of one Nelder–Mead run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NelderMeadConfig {
    pub max_iterations: usize,
    /// Spread `f_max − f_min` over the simplex.
    pub ftol: f64,
    /// Largest vertex distance from the best vertex.
    pub xtol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_iterations: 20_000,
            ftol: 1e-9,
            xtol: 1e-7,
            initial_step: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Counted<F> {
    f: F,
    calls: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.calls += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteObjective {
                point: x.to_vec(),
                value: v,
            })
        }
    }
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b − a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimises `f` from `start` with the standard simplex moves.
///
/// Stops once both the objective spread and the simplex size fall below
/// their tolerances, or at the iteration cap.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    config: &NelderMeadConfig,
) -> Result<NelderMeadResult> {
    let k = start.len();
    if k == 0 {
        return Err(Error::Argument(
            "Nelder–Mead needs at least one parameter".into(),
        ));
    }
    let mut f = Counted { f, calls: 0 };
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    simplex.push(start.to_vec());
    for i in 0..k {
        let mut v = start.to_vec();
        v[i] += config.initial_step;
        simplex.push(v);
    }
    let mut values = simplex
        .iter()
        .map(|v| f.eval(v))
        .collect::<Result<Vec<_>>>()?;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        let mut order: Vec<usize> = (0..=k).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[k] - values[0];
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= config.ftol && size <= config.xtol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; k];
        for v in &simplex[..k] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / k as f64;
            }
        }
        let worst = simplex[k].clone();
        let reflected = affine(&centroid, &worst, -REFLECT);
        let fr = f.eval(&reflected)?;

        if fr < values[0] {
            let expanded = affine(&centroid, &worst, -EXPAND);
            let fe = f.eval(&expanded)?;
            if fe < fr {
                simplex[k] = expanded;
                values[k] = fe;
            } else {
                simplex[k] = reflected;
                values[k] = fr;
            }
            continue;
        }
        if fr < values[k - 1] {
            simplex[k] = reflected;
            values[k] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[k] {
            let c = affine(&centroid, &reflected, CONTRACT);
            let fc = f.eval(&c)?;
            (c, (fc <= fr).then_some(fc))
        } else {
            let c = affine(&centroid, &worst, CONTRACT);
            let fc = f.eval(&c)?;
            (c, (fc < values[k]).then_some(fc))
        };
        if let Some(fc) = fc {
            simplex[k] = contracted;
            values[k] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=k {
            simplex[i] = affine(&best, &simplex[i], SHRINK);
            values[i] = f.eval(&simplex[i])?;
        }
    }

    let best = (0..=k)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    Ok(NelderMeadResult {
        argmin: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations: f.calls,
        converged,
    })
}
