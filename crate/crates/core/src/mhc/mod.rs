//! Monitored brick-wall circuits of Haar-random two-qubit gates.
//!
//! Layer `t` acts on bonds `(2b + t mod 2, 2b + 1 + t mod 2)` with periodic
//! wrap. After each layer every site is measured in the z basis with
//! probability `p`. Gates and measurement coins come from counter-based
//! streams keyed by `(seed, layer, site)`, so a trajectory is a pure
//! function of its configuration.

mod swapping;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use swapping::{swapping_diagnostic, SwappingReport, REFERENCE_ALPHA_IE, REFERENCE_ALPHA_MINN};

use crate::magic::{nn_two_qubit_pure_analytic, sre2_mixed, sre2_pure};
use crate::optim::{nn_optimize, OptimizerConfig};
use crate::qcore::{complement_branches, haar_random_unitary, partial_trace, StateVector};
use crate::scan::{RunningStats, ScanRecord};
use crate::{seed, Error, Result};

/// Largest chain simulated as a state vector.
pub const MHC_MAX_SITES: usize = 16;

/// Largest chain for which MINN sums over every outcome.
pub const MINN_ENUMERATE_MAX_SITES: usize = 12;

const STREAM_GATE: u64 = 0;
const STREAM_COIN: u64 = 1;
const STREAM_OUTCOME: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitConfig {
    #[serde(rename = "L")]
    pub l: usize,
    pub p: f64,
    pub depth: usize,
    pub seed: u64,
    /// Measure after every layer (default) or only after odd layers.
    pub measure_every_layer: bool,
}

impl CircuitConfig {
    /// Depth `4L`, measurements after every layer.
    pub fn new(l: usize, p: f64, seed: u64) -> Result<Self> {
        let c = Self {
            l,
            p,
            depth: 4 * l,
            seed,
            measure_every_layer: true,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 4 || self.l % 2 != 0 {
            return Err(Error::Argument(format!(
                "brick wall needs an even L >= 4, got {}",
                self.l
            )));
        }
        if self.l > MHC_MAX_SITES {
            return Err(Error::Resource(format!(
                "state-vector circuits are capped at L = {MHC_MAX_SITES}"
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Argument(format!(
                "measurement rate {} outside [0, 1]",
                self.p
            )));
        }
        if self.depth == 0 {
            return Err(Error::Argument("depth must be at least 1".into()));
        }
        Ok(())
    }

    /// Configuration of trajectory `i` of an ensemble keyed by `self.seed`.
    pub fn trajectory(&self, i: u64) -> Self {
        Self {
            seed: seed::derive(self.seed, &[i]),
            ..*self
        }
    }

    fn measures_after(&self, layer: usize) -> bool {
        self.measure_every_layer || layer % 2 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub layer: usize,
    pub site: usize,
    pub outcome: u8,
}

/// Observables of the pair `(1, r)` on one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairObservables {
    pub r: usize,
    pub nn: Option<f64>,
    pub sre: Option<f64>,
    pub mutual_information: Option<f64>,
    pub minn: Option<f64>,
    pub post_measurement_sre: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub outcomes: Vec<Measurement>,
    pub observables: Vec<PairObservables>,
}

fn bonds(l: usize, layer: usize) -> Vec<[usize; 2]> {
    let off = layer % 2;
    (0..l / 2)
        .map(|b| [(2 * b + off) % l, (2 * b + 1 + off) % l])
        .collect()
}

fn apply_layer(state: &mut StateVector, config: &CircuitConfig, layer: usize) -> Result<()> {
    for (b, pair) in bonds(config.l, layer).into_iter().enumerate() {
        let mut rng = seed::rng(config.seed, &[STREAM_GATE, layer as u64, b as u64]);
        let u = haar_random_unitary(4, &mut rng)?;
        state.apply_gate_in_place(&u, &pair)?;
    }
    Ok(())
}

/// Runs one trajectory from `|0…0⟩`.
pub fn run_trajectory(config: &CircuitConfig) -> Result<(StateVector, TrajectoryRecord)> {
    config.validate()?;
    let mut state = StateVector::zero(config.l);
    let mut outcomes = Vec::new();
    for layer in 0..config.depth {
        apply_layer(&mut state, config, layer)?;
        if !config.measures_after(layer) || config.p == 0.0 {
            continue;
        }
        for site in 0..config.l {
            let mut coin = seed::rng(config.seed, &[STREAM_COIN, layer as u64, site as u64]);
            if coin.random::<f64>() >= config.p {
                continue;
            }
            let mut draw = seed::rng(config.seed, &[STREAM_OUTCOME, layer as u64, site as u64]);
            let p0 = state.probability(site, 0);
            let outcome = u8::from(draw.random::<f64>() >= p0);
            state.project(site, outcome)?;
            outcomes.push(Measurement {
                layer,
                site,
                outcome,
            });
        }
    }
    Ok((
        state,
        TrajectoryRecord {
            seed: config.seed,
            outcomes,
            observables: Vec::new(),
        },
    ))
}

/// Rebuilds the final state from the gates of `config` and the recorded
/// outcomes, without drawing any measurement randomness.
pub fn replay(config: &CircuitConfig, record: &TrajectoryRecord) -> Result<StateVector> {
    config.validate()?;
    if record.seed != config.seed {
        return Err(Error::Argument("record belongs to a different seed".into()));
    }
    let mut state = StateVector::zero(config.l);
    let mut log = record.outcomes.iter().peekable();
    for layer in 0..config.depth {
        apply_layer(&mut state, config, layer)?;
        while let Some(m) = log.next_if(|m| m.layer == layer) {
            state.project(m.site, m.outcome)?;
        }
    }
    if log.next().is_some() {
        return Err(Error::Argument(
            "outcome log extends past the circuit depth".into(),
        ));
    }
    Ok(state)
}

fn check_sites(config: &CircuitConfig, sites: &[usize]) -> Result<()> {
    match sites.iter().find(|&&r| r < 2 || r > config.l) {
        Some(r) => Err(Error::Argument(format!(
            "site r = {r} outside 2..={}",
            config.l
        ))),
        None => Ok(()),
    }
}

/// NN (numerical, `optimizer` settings) and SRE of `(1, r)` for every site.
pub fn pair_nn(
    state: &StateVector,
    sites: &[usize],
    optimizer: &OptimizerConfig,
) -> Result<Vec<PairObservables>> {
    sites
        .iter()
        .map(|&r| {
            let rho = partial_trace(state, &[0, r - 1])?;
            let nn = nn_optimize(&rho, optimizer)?.value;
            Ok(PairObservables {
                r,
                nn: Some(nn),
                sre: Some(sre2_mixed(&rho)),
                mutual_information: Some(rho.mutual_information()?),
                minn: None,
                post_measurement_sre: None,
            })
        })
        .collect()
}

/// MINN and mean post-measurement SRE of `(1, r)` under z measurement of
/// every other site, plus the pre-measurement mutual information.
/// Sums over all outcomes up to [`MINN_ENUMERATE_MAX_SITES`], otherwise
/// draws one outcome with `rng_seed`.
pub fn pair_minn(
    state: &StateVector,
    sites: &[usize],
    rng_seed: u64,
) -> Result<Vec<PairObservables>> {
    let n = state.n_qubits();
    sites
        .iter()
        .map(|&r| {
            let keep = [0, r - 1];
            let mi = partial_trace(state, &keep)?.mutual_information()?;
            let (minn, post) = if n <= MINN_ENUMERATE_MAX_SITES {
                let mut minn = 0.0;
                let mut post = 0.0;
                for b in complement_branches(state, keep)? {
                    if let Some(s) = b.state() {
                        minn += b.probability * nn_two_qubit_pure_analytic(&s)?;
                        post += b.probability * sre2_pure(&s);
                    }
                }
                (minn, post)
            } else {
                let mut rng = seed::rng(rng_seed, &[r as u64]);
                let mut s = state.clone();
                for q in (0..n).filter(|q| !keep.contains(q)) {
                    let outcome = u8::from(rng.random::<f64>() >= s.probability(q, 0));
                    s.project(q, outcome)?;
                }
                let b = complement_branches(&s, keep)?
                    .into_iter()
                    .max_by(|a, b| a.probability.total_cmp(&b.probability))
                    .and_then(|b| b.state())
                    .ok_or_else(|| Error::Solver("empty post-measurement branch".into()))?;
                (nn_two_qubit_pure_analytic(&b)?, sre2_pure(&b))
            };
            Ok(PairObservables {
                r,
                nn: None,
                sre: None,
                mutual_information: Some(mi),
                minn: Some(minn),
                post_measurement_sre: Some(post),
            })
        })
        .collect()
}

/// Trajectory ensemble summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleScan {
    pub records: Vec<ScanRecord>,
    pub trajectories: Vec<TrajectoryRecord>,
    pub n_failed: usize,
}

fn ensemble<F>(
    config: &CircuitConfig,
    sites: &[usize],
    n_traj: usize,
    observe: F,
) -> Result<EnsembleScan>
where
    F: Fn(&StateVector, &CircuitConfig) -> Result<Vec<PairObservables>> + Sync,
{
    config.validate()?;
    check_sites(config, sites)?;
    if n_traj == 0 {
        return Err(Error::Argument("n_traj must be at least 1".into()));
    }
    let runs: Vec<Result<TrajectoryRecord>> = (0..n_traj as u64)
        .into_par_iter()
        .map(|i| {
            let cfg = config.trajectory(i);
            let (state, mut rec) = run_trajectory(&cfg)?;
            rec.observables = observe(&state, &cfg)?;
            Ok(rec)
        })
        .collect();
    let mut trajectories = Vec::with_capacity(n_traj);
    let mut n_failed = 0;
    for run in runs {
        match run {
            Ok(rec) => trajectories.push(rec),
            Err(e) if e.is_usage() => return Err(e),
            Err(_) => n_failed += 1,
        }
    }
    if trajectories.is_empty() {
        return Err(Error::Solver(format!("all {n_traj} trajectories failed")));
    }
    let fields: [(&str, fn(&PairObservables) -> Option<f64>); 5] = [
        ("nn", |o| o.nn),
        ("sre", |o| o.sre),
        ("mutual_information", |o| o.mutual_information),
        ("minn", |o| o.minn),
        ("post_measurement_sre", |o| o.post_measurement_sre),
    ];
    let mut records = Vec::new();
    for (k, &r) in sites.iter().enumerate() {
        for (name, get) in fields {
            let values: Vec<f64> = trajectories
                .iter()
                .filter_map(|t| get(&t.observables[k]))
                .collect();
            if values.is_empty() {
                continue;
            }
            let stats: RunningStats = values.into_iter().collect();
            records.push(
                ScanRecord::new("statevector", config.l, config.p, r, name, stats.mean())
                    .with_stats(stats.stderr(), stats.count())
                    .with_seed(config.seed),
            );
        }
    }
    Ok(EnsembleScan {
        records,
        trajectories,
        n_failed,
    })
}

/// Trajectory-averaged NN (by optimisation) and SRE of `(1, r)`.
pub fn averaged_nn_scan(
    config: &CircuitConfig,
    sites: &[usize],
    n_traj: usize,
    optimizer: &OptimizerConfig,
) -> Result<EnsembleScan> {
    ensemble(config, sites, n_traj, |state, cfg| {
        pair_nn(
            state,
            sites,
            &optimizer.with_seed(seed::derive(cfg.seed, &[STREAM_OUTCOME + 1])),
        )
    })
}

/// Trajectory-averaged MINN, post-measurement SRE and pre-measurement
/// mutual information of `(1, r)`.
pub fn minn_scan_mhc(
    config: &CircuitConfig,
    sites: &[usize],
    n_traj: usize,
) -> Result<EnsembleScan> {
    ensemble(config, sites, n_traj, |state, cfg| {
        pair_minn(state, sites, seed::derive(cfg.seed, &[STREAM_OUTCOME + 2]))
    })
}

/// Trajectory mean and standard error of the least-squares slope of
/// `post_measurement_sre − minn` against `r`.
pub fn gap_slope(trajectories: &[TrajectoryRecord]) -> Option<(f64, f64)> {
    let stats: RunningStats = trajectories
        .iter()
        .filter_map(|t| {
            let pts: Vec<(f64, f64)> = t
                .observables
                .iter()
                .filter_map(|o| Some((o.r as f64, o.post_measurement_sre? - o.minn?)))
                .collect();
            if pts.len() < 2 {
                return None;
            }
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            Some(sxy / sxx)
        })
        .collect();
    (stats.count() >= 2).then(|| (stats.mean(), stats.stderr()))
}

/// Half-chain von Neumann entropy of the final state of every trajectory.
pub fn half_chain_entropies(config: &CircuitConfig, n_traj: usize) -> Result<Vec<f64>> {
    config.validate()?;
    (0..n_traj as u64)
        .into_par_iter()
        .map(|i| {
            let (s, _) = run_trajectory(&config.trajectory(i))?;
            crate::qcore::entanglement_entropy(&s, config.l / 2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brick_wall_geometry() {
        assert_eq!(bonds(6, 0), vec![[0, 1], [2, 3], [4, 5]]);
        assert_eq!(bonds(6, 1), vec![[1, 2], [3, 4], [5, 0]]);
    }

    #[test]
    fn deterministic_and_replayable() {
        let cfg = CircuitConfig::new(6, 0.3, 11).unwrap();
        let (s1, r1) = run_trajectory(&cfg).unwrap();
        let (s2, r2) = run_trajectory(&cfg).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(s1, s2);
        assert!(!r1.outcomes.is_empty());
        assert_eq!(replay(&cfg, &r1).unwrap(), s1);
        assert!((s1.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn full_measurement_gives_basis_state() {
        let cfg = CircuitConfig::new(6, 1.0, 4).unwrap();
        let (s, rec) = run_trajectory(&cfg).unwrap();
        assert_eq!(rec.outcomes.len(), 6 * cfg.depth);
        let max = s
            .amplitudes()
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(CircuitConfig::new(5, 0.1, 0).is_err());
        assert!(CircuitConfig::new(6, 1.5, 0).is_err());
        assert!(matches!(
            CircuitConfig::new(18, 0.1, 0),
            Err(Error::Resource(_))
        ));
        assert!(CircuitConfig::new(6, 0.1, 0)
            .unwrap()
            .with_depth(0)
            .validate()
            .is_err());
    }

    #[test]
    fn gap_slope_of_linear_gaps() {
        let obs = |r: usize, gap: f64| PairObservables {
            r,
            nn: None,
            sre: None,
            mutual_information: None,
            minn: Some(0.1),
            post_measurement_sre: Some(0.1 + gap),
        };
        let rec = |k: f64| TrajectoryRecord {
            seed: 0,
            outcomes: Vec::new(),
            observables: (2..6).map(|r| obs(r, k * r as f64)).collect(),
        };
        let (m, s) = gap_slope(&[rec(0.5), rec(1.5)]).unwrap();
        assert!((m - 1.0).abs() < 1e-12 && (s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn minn_vanishes_on_measured_out_states() {
        let cfg = CircuitConfig::new(6, 1.0, 2).unwrap();
        let scan = minn_scan_mhc(&cfg, &[2, 3, 4], 4).unwrap();
        for rec in scan.records.iter().filter(|r| r.measure_name == "minn") {
            assert!(rec.value.abs() < 1e-10);
        }
        let opt = OptimizerConfig::default().with_starts(3);
        let scan = averaged_nn_scan(&cfg, &[2, 3], 3, &opt).unwrap();
        for rec in scan.records.iter().filter(|r| r.measure_name == "nn") {
            assert!(rec.value.abs() < 1e-9);
        }
    }
}
