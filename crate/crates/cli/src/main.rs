//! `lgk`: command-line driver for the lattice gauge kinematics engine.
//!
//! Every subcommand reads a JSON run configuration, prints or writes a
//! deterministic report and exits with 0 only when all of its checks pass
//! (1 on failed checks, 2 on errors). Timings go to stderr.

mod commands;
mod config;
mod report;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use report::write_spectrum_csv;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "lgk", version, about = "Kinematics of Hamiltonian lattice gauge theory on small cubic lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Solver residual target and CLI check tolerance (overrides the config).
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for random vectors and gauge samples (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for config.json, report.json and CSV files
    /// (overrides the config); the report goes to stdout when unset.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Site, link and plaquette counts and envelope sizes.
    LatticeInfo(Common),
    /// Total dimension, Gauss-sector rank and per-site projector ranks.
    SectorDim(Common),
    /// Lowest eigenvalues of the Hamiltonian, in the Gauss sector and in full.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Number of eigenvalues (overrides solver.k).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Ground-state expectation of a Wilson loop in the Gauss sector.
    Wilson(Common),
    /// Constraint reduction, traditional observables, subsystem and nesting checks.
    TprocedureReport(Common),
    /// Full invariant suite.
    Verify(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::LatticeInfo(_) => "lattice-info",
            Command::SectorDim(_) => "sector-dim",
            Command::Spectrum { .. } => "spectrum",
            Command::Wilson(_) => "wilson",
            Command::TprocedureReport(_) => "tprocedure-report",
            Command::Verify(_) => "verify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::LatticeInfo(c) | Command::SectorDim(c) | Command::Wilson(c) | Command::TprocedureReport(c) | Command::Verify(c) => c,
            Command::Spectrum { common, .. } => common,
        }
    }
}

fn load(cmd: &Command) -> Result<RunConfig> {
    let common = cmd.common();
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(tol) = common.tol {
        cfg.tol = tol;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out = Some(out.display().to_string());
    }
    if let Command::Spectrum { k: Some(k), .. } = cmd {
        cfg.solver.k = *k;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cmd: &Command) -> Result<bool> {
    let cfg = load(cmd)?;
    let start = Instant::now();
    let output = match cmd {
        Command::LatticeInfo(_) => commands::lattice_info(&cfg)?,
        Command::SectorDim(_) => commands::sector_dim(&cfg)?,
        Command::Spectrum { .. } => commands::spectrum(&cfg)?,
        Command::Wilson(_) => commands::wilson(&cfg)?,
        Command::TprocedureReport(_) => commands::tprocedure_report(&cfg)?,
        Command::Verify(_) => commands::verify(&cfg)?,
    };
    eprintln!("timing: {} took {:.3} s", cmd.name(), start.elapsed().as_secs_f64());
    let report = &output.report;
    match &cfg.out {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            report.write(&dir)?;
            for (name, rows) in &output.tables {
                write_spectrum_csv(&dir.join(name), rows)?;
            }
            print!("{}", report.summary());
        }
        None => print!("{}", report.to_json()?),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
