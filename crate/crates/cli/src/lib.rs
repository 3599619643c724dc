//! Library side of the `nnmagic` binary: configuration resolution, command
//! execution and manifest handling.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;

use std::io::Write;
use std::path::Path;

use args::{Cli, Command};
use config::{set, CommandConfig, FileConfig, ResolvedConfig};
use error::{CliError, CliResult};
use manifest::{RunManifest, MANIFEST_FILE};
use output::OutputDir;

/// Result of executing one configuration.
#[derive(Debug, Default)]
pub struct Report {
    /// Non-fatal failures; completed outputs are still written.
    pub failures: Vec<String>,
    pub selfcheck_failed: bool,
    pub lines: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.selfcheck_failed {
            3
        } else if !self.failures.is_empty() {
            2
        } else {
            0
        }
    }
}

fn window(v: Option<Vec<f64>>) -> Option<[f64; 2]> {
    v.map(|w| [w[0], w[1]])
}

/// Applies the precedence flags > file > defaults.
pub fn resolve(cli: &Cli) -> CliResult<ResolvedConfig> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let command = match &cli.command {
        Command::Fig1(a) => {
            let mut c = file.fig1.clone().unwrap_or_default();
            set(&mut c.theta_points, a.theta_points);
            set(&mut c.haar_samples, a.haar_samples);
            set(&mut c.bins, a.bins);
            set(&mut c.werner_points, a.werner_points);
            set(&mut c.nn_starts, a.nn_starts);
            CommandConfig::Fig1(c)
        }
        Command::Tfim(a) => {
            let mut c = file.tfim.clone().unwrap_or_default();
            set(&mut c.l, a.l);
            set(&mut c.h, a.h.clone());
            set(&mut c.r_min, a.r_min);
            set(&mut c.r_max, a.r_max.map(Some));
            set(&mut c.backend, a.backend.clone());
            set(&mut c.axes, a.axes.clone());
            set(&mut c.mode, a.mode.clone());
            set(&mut c.samples, a.samples);
            set(&mut c.fit_window, window(a.fit_window.clone()).map(Some));
            CommandConfig::Tfim(c)
        }
        Command::Mhc(a) => {
            let mut c = file.mhc.clone().unwrap_or_default();
            set(&mut c.l, a.l);
            set(&mut c.p, a.p);
            set(&mut c.depth, a.depth.map(Some));
            set(&mut c.n_traj_nn, a.n_traj_nn);
            set(&mut c.n_traj_minn, a.n_traj_minn);
            set(&mut c.r_min, a.r_min);
            set(&mut c.r_max, a.r_max.map(Some));
            set(&mut c.nn_starts, a.nn_starts);
            c.skip_nn |= a.skip_nn;
            c.measure_every_layer &= !a.measure_odd_layers;
            c.dump |= a.dump;
            set(&mut c.fit_window, window(a.fit_window.clone()));
            CommandConfig::Mhc(c)
        }
        Command::Rom(a) => {
            let mut c = file.rom.clone().unwrap_or_default();
            set(&mut c.state, a.state.clone());
            set(&mut c.starts, a.starts);
            CommandConfig::Rom(c)
        }
        Command::Selfcheck => CommandConfig::Selfcheck(Default::default()),
        Command::Rerun(_) => {
            return Err(CliError::Usage(
                "rerun takes its configuration from the manifest".into(),
            ))
        }
    };
    Ok(ResolvedConfig {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        threads: cli.threads.or(file.threads),
        paper_targets: cli.paper_targets || file.paper_targets.unwrap_or(false),
        command,
    })
}

/// Runs a resolved configuration into `out_dir` and writes its manifest.
pub fn execute(config: &ResolvedConfig, out_dir: &Path) -> CliResult<(RunManifest, Report)> {
    let started = chrono::Utc::now().to_rfc3339();
    let mut out = OutputDir::create(out_dir)?;
    let report = match &config.command {
        CommandConfig::Fig1(c) => commands::fig1::run(c, config, &mut out)?,
        CommandConfig::Tfim(c) => commands::tfim::run(c, config, &mut out)?,
        CommandConfig::Mhc(c) => commands::mhc::run(c, config, &mut out)?,
        CommandConfig::Rom(c) => commands::rom::run(c, config, &mut out)?,
        CommandConfig::Selfcheck(_) => commands::selfcheck::run(config, &mut out)?,
    };
    let manifest = RunManifest {
        subcommand: config.command.name().to_string(),
        config: config.clone(),
        seed: config.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        outputs: out.digests().to_vec(),
        failures: report.failures.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    std::fs::write(out.root().join(MANIFEST_FILE), bytes)?;
    Ok((manifest, report))
}

/// Re-executes `manifest` into `out_dir` and lists files whose digest differs.
pub fn rerun(manifest: &RunManifest, out_dir: &Path) -> CliResult<(RunManifest, Vec<String>)> {
    let (fresh, _) = execute(&manifest.config, out_dir)?;
    let mut mismatched: Vec<String> = manifest
        .outputs
        .iter()
        .filter(|d| !fresh.outputs.contains(d))
        .map(|d| d.file.clone())
        .collect();
    mismatched.extend(
        fresh
            .outputs
            .iter()
            .filter(|d| !manifest.outputs.iter().any(|m| m.file == d.file))
            .map(|d| d.file.clone()),
    );
    Ok((fresh, mismatched))
}

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Prints to stdout, ignoring a closed pipe.
fn say(line: impl std::fmt::Display) {
    let _ = writeln!(std::io::stdout(), "{line}");
}

/// Parsed command line to exit code.
pub fn run(cli: Cli) -> CliResult<i32> {
    if let Command::Rerun(a) = &cli.command {
        let manifest = RunManifest::load(&a.manifest)?;
        configure_threads(cli.threads.or(manifest.config.threads))?;
        let (_, mismatched) = rerun(&manifest, &cli.out_dir)?;
        if mismatched.is_empty() {
            say(format!(
                "rerun of {}: {} outputs identical",
                manifest.subcommand,
                manifest.outputs.len()
            ));
            return Ok(0);
        }
        eprintln!(
            "rerun of {}: outputs differ: {}",
            manifest.subcommand,
            mismatched.join(", ")
        );
        return Ok(2);
    }
    let config = resolve(&cli)?;
    configure_threads(config.threads)?;
    let (manifest, report) = execute(&config, &cli.out_dir)?;
    for line in &report.lines {
        say(line);
    }
    for d in &manifest.outputs {
        say(format!(
            "wrote {} ({} bytes)",
            cli.out_dir.join(&d.file).display(),
            d.bytes
        ));
    }
    for f in &report.failures {
        eprintln!("failed: {f}");
    }
    Ok(report.exit_code())
}
