//! Scenario runner for the wavequanta library.
//!
//! Every subcommand reads a JSON scenario config, computes all outputs in
//! memory and only then writes them, together with the effective config,
//! into the output directory.

pub mod config;
pub mod error;
pub mod report;
pub mod scenario;

use clap::{Parser, Subcommand};
use config::ScenarioConfig;
use error::CliError;
use report::{Artifacts, Check, Outcome};
use scenario::Module;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;
use wavequanta::Units;

#[derive(Debug, Parser)]
#[command(name = "wavequanta", version, about = "Reproducible scenario runner for wave quanta simulations")]
pub struct Cli {
    /// Scenario config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Unit preset; overrides `units` in the config.
    #[arg(long, global = true)]
    pub units: Option<Units>,
    /// Per-module timings on stderr and every check on stdout.
    #[arg(long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Leapfrog chain against exact mode evolution.
    PhononSim,
    /// Wigner distribution of a Gaussian action wave.
    Wigner,
    /// Random photon mode sets: energy routes and field laws.
    PhotonField,
    /// Complex potential residuals and convergence orders.
    HelicityCheck,
    /// Photon gas relaxation and Planck spectrum.
    ThermalRelax,
    /// Run the invariant suite of every module block in the config.
    Verify,
}

impl Command {
    pub fn module(self) -> Option<Module> {
        match self {
            Command::PhononSim => Some(Module::Lattice),
            Command::Wigner => Some(Module::Wigner),
            Command::PhotonField => Some(Module::Field),
            Command::HelicityCheck => Some(Module::Helicity),
            Command::ThermalRelax => Some(Module::Kinetics),
            Command::Verify => None,
        }
    }

    fn default_scenario(self) -> &'static str {
        match self {
            Command::PhononSim => "phonon-default",
            Command::Wigner => "phonon-gaussian",
            Command::PhotonField => "photon-field",
            Command::HelicityCheck => "helicity-convergence",
            Command::ThermalRelax => "thermal-planck",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Serialize)]
struct CheckReport<'a> {
    scenario: &'a str,
    passed: bool,
    checks: &'a [Check],
}

/// What a finished invocation produced.
#[derive(Debug)]
pub struct Completed {
    pub out_dir: PathBuf,
    pub artifacts: Artifacts,
    pub checks: Vec<Check>,
    pub failed: Vec<String>,
}

/// Load the config, apply the unit override and fill every default.
///
/// The output directory is not part of the effective config, so the same
/// scenario written to two places produces identical files.
pub fn effective_config(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::bare(cli.command.default_scenario()),
    };
    if let Some(u) = cli.units {
        cfg.units = u;
    }
    if cfg.output_dir.as_deref() == Some("") {
        return Err(error::invalid("output_dir", "must not be empty"));
    }
    if let Some(m) = cli.command.module() {
        m.ensure(&mut cfg);
    }
    cfg.resolve();
    Ok(cfg)
}

/// `--out`, else the config's `output_dir`, else `out/<scenario>`.
pub fn output_dir(cli: &Cli, cfg: &ScenarioConfig) -> PathBuf {
    match (&cli.out, &cfg.output_dir) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => PathBuf::from(dir),
        (None, None) => PathBuf::from("out").join(&cfg.scenario),
    }
}

/// Compute everything for one invocation without touching the file system.
pub fn compute(cli: &Cli, cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let modules: Vec<Module> = match cli.command.module() {
        Some(m) => vec![m],
        None => Module::ALL.into_iter().filter(|m| m.present(cfg)).collect(),
    };
    if modules.is_empty() {
        return Err(CliError::Validation("config has no module block to verify".into()));
    }
    let mut all = Outcome::default();
    for m in modules {
        let start = Instant::now();
        let out = m.run(cfg)?;
        if cli.verbose {
            eprintln!("[{}] {} files, {:.3} s", m.name(), out.artifacts.files.len(), start.elapsed().as_secs_f64());
        }
        if cli.command.module().is_some() {
            all.artifacts.extend(out.artifacts);
        }
        all.checks.extend(out.checks);
    }
    let failed = all.failed();
    let report = CheckReport {
        scenario: &cfg.scenario,
        passed: failed.is_empty(),
        checks: &all.checks,
    };
    let name = if cli.command.module().is_some() { "invariants.json" } else { "verify_report.json" };
    all.artifacts.json(name, &report);
    all.artifacts.text("effective_config.json", cfg.to_json());
    Ok(all)
}

/// Run one invocation: compute, then write every output.
pub fn execute(cli: &Cli) -> Result<Completed, CliError> {
    let cfg = effective_config(cli)?;
    let outcome = compute(cli, &cfg)?;
    let out_dir = output_dir(cli, &cfg);
    outcome.artifacts.write_all(&out_dir)?;
    let failed = outcome.failed();
    Ok(Completed {
        out_dir,
        artifacts: outcome.artifacts,
        checks: outcome.checks,
        failed,
    })
}
