//! `cadsim`: gain-doublet, dispersion, null-search, modulation-spectrum and
//! gyro-enhancement runs driven by a flat config file.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric-domain error,
//! 4 data error, 1 anything else (i/o).

mod commands;
mod config;
mod data;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;
use output::Emitter;

#[derive(Parser, Debug)]
#[command(
    name = "cadsim",
    version,
    about = "Bi-frequency Raman gain doublet simulator"
)]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Measurement CSV for `null`.
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    /// Output directory; overrides `out_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Noise seed; overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Gain doublet and its Kramers-Kronig index profile.
    Gain,
    /// Model index profile next to a simulated heterodyne measurement.
    Dispersion,
    /// Pump separation of the group-index null, from data or from the model.
    Null,
    /// Gain modulation time series and power spectrum.
    Spectrum,
    /// Scale-factor enhancement over pump separation.
    SweepEnhancement,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Gain => "gain",
            Self::Dispersion => "dispersion",
            Self::Null => "null",
            Self::Spectrum => "spectrum",
            Self::SweepEnhancement => "sweep-enhancement",
        }
    }
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.display().to_string();
    }
    let resolved = cfg.resolve()?;
    // The output directory does not change the numbers, so it stays out of the hash.
    let mut hashed = cfg.clone();
    hashed.out_dir = String::new();
    let mut out = Emitter::new(
        &PathBuf::from(&cfg.out_dir),
        hashed.hash(),
        cli.command.name(),
        cli.svg,
    )?;

    match cli.command {
        Command::Gain => commands::gain(&cfg, &resolved, &mut out)?,
        Command::Dispersion => commands::dispersion(&cfg, &resolved, &mut out)?,
        Command::Null => commands::null(&cfg, &resolved, cli.data.as_deref(), &mut out)?,
        Command::Spectrum => commands::spectrum(&cfg, &resolved, &mut out)?,
        Command::SweepEnhancement => commands::sweep_enhancement(&cfg, &resolved, &mut out)?,
    }
    Ok(out.written().to_vec())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("cadsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
