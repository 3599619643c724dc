//! Resolved run configuration. Precedence: flags, then config file, then
//! defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1Config {
    pub theta_points: usize,
    pub haar_samples: usize,
    pub bins: usize,
    pub werner_points: usize,
    /// Optimizer starts per Werner point.
    pub nn_starts: usize,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Self {
            theta_points: 181,
            haar_samples: 100_000,
            bins: 40,
            werner_points: 101,
            nn_starts: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TfimRunConfig {
    #[serde(rename = "L")]
    pub l: usize,
    pub h: Vec<f64>,
    pub r_min: usize,
    /// Defaults to `L/2 + 1`.
    pub r_max: Option<usize>,
    pub backend: String,
    /// MINN axes; empty skips the MINN scan.
    pub axes: Vec<char>,
    pub mode: String,
    pub samples: usize,
    /// Defaults to `[4, L/4]`.
    pub fit_window: Option<[f64; 2]>,
}

impl Default for TfimRunConfig {
    fn default() -> Self {
        Self {
            l: 128,
            h: vec![1.0],
            r_min: 2,
            r_max: None,
            backend: "free-fermion".into(),
            axes: Vec::new(),
            mode: "enumerate".into(),
            samples: 10_000,
            fit_window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MhcRunConfig {
    #[serde(rename = "L")]
    pub l: usize,
    pub p: f64,
    /// Defaults to `4L`.
    pub depth: Option<usize>,
    pub n_traj_nn: usize,
    pub n_traj_minn: usize,
    pub r_min: usize,
    pub r_max: Option<usize>,
    pub nn_starts: usize,
    pub skip_nn: bool,
    pub measure_every_layer: bool,
    pub dump: bool,
    pub fit_window: [f64; 2],
}

impl Default for MhcRunConfig {
    fn default() -> Self {
        Self {
            l: 12,
            p: 0.17,
            depth: None,
            n_traj_nn: 500,
            n_traj_minn: 5000,
            r_min: 2,
            r_max: None,
            nn_starts: 30,
            skip_nn: false,
            measure_every_layer: true,
            dump: false,
            fit_window: [2.0, 7.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RomRunConfig {
    pub state: String,
    pub starts: usize,
}

impl Default for RomRunConfig {
    fn default() -> Self {
        Self {
            state: "rho0".into(),
            starts: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SelfcheckConfig {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum CommandConfig {
    Fig1(Fig1Config),
    Tfim(TfimRunConfig),
    Mhc(MhcRunConfig),
    Rom(RomRunConfig),
    Selfcheck(SelfcheckConfig),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Fig1(_) => "fig1",
            CommandConfig::Tfim(_) => "tfim",
            CommandConfig::Mhc(_) => "mhc",
            CommandConfig::Rom(_) => "rom",
            CommandConfig::Selfcheck(_) => "selfcheck",
        }
    }
}

/// Everything that determines the output bytes of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub seed: u64,
    pub threads: Option<usize>,
    pub paper_targets: bool,
    pub command: CommandConfig,
}

/// Contents of a `--config` TOML file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub paper_targets: Option<bool>,
    pub fig1: Option<Fig1Config>,
    pub tfim: Option<TfimRunConfig>,
    pub mhc: Option<MhcRunConfig>,
    pub rom: Option<RomRunConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Overwrites `target` when a flag was given.
pub fn set<T>(target: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *target = v;
    }
}
