use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "nnmagic",
    version,
    about = "Non-local nonstabilizerness scans and checks"
)]
pub struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory receiving every output file.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,

    /// TOML file with defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Annotate outputs with published reference values.
    #[arg(long, global = true)]
    pub paper_targets: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-qubit sweeps: Schmidt angle, Haar histogram, Werner family.
    Fig1(Fig1Args),
    /// Transverse-field Ising chain: two-point NN, correlators, MINN.
    Tfim(TfimArgs),
    /// Monitored Haar brick-wall circuits.
    Mhc(MhcArgs),
    /// Robustness of magic and its local-unitary minimum.
    Rom(RomArgs),
    /// Cross-validation oracles; exits 3 on any failure.
    Selfcheck,
    /// Re-runs a recorded manifest and compares output digests.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long)]
    pub theta_points: Option<usize>,
    #[arg(long)]
    pub haar_samples: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub werner_points: Option<usize>,
    #[arg(long)]
    pub nn_starts: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TfimArgs {
    #[arg(long = "L")]
    pub l: Option<usize>,
    /// Comma-separated fields.
    #[arg(long, value_delimiter = ',')]
    pub h: Option<Vec<f64>>,
    #[arg(long)]
    pub r_min: Option<usize>,
    #[arg(long)]
    pub r_max: Option<usize>,
    /// `ed` or `free-fermion`.
    #[arg(long)]
    pub backend: Option<String>,
    /// Comma-separated MINN axes out of x, y, z.
    #[arg(long, value_delimiter = ',')]
    pub axes: Option<Vec<char>>,
    /// `enumerate` or `sample`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Fit window as `r_min,r_max`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub fit_window: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct MhcArgs {
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub n_traj_nn: Option<usize>,
    #[arg(long)]
    pub n_traj_minn: Option<usize>,
    #[arg(long)]
    pub r_min: Option<usize>,
    #[arg(long)]
    pub r_max: Option<usize>,
    #[arg(long)]
    pub nn_starts: Option<usize>,
    /// Skip the optimised two-point NN scan.
    #[arg(long)]
    pub skip_nn: bool,
    /// Measure only after every second layer.
    #[arg(long)]
    pub measure_odd_layers: bool,
    /// Write per-trajectory records as line-delimited JSON.
    #[arg(long)]
    pub dump: bool,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub fit_window: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct RomArgs {
    /// `rho0`, `phi0-mixed`, `t-state`, `werner:<x>` or `schmidt:<theta>`.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub starts: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}
