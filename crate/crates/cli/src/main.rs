//! `nfmimo` — experiment runner for the near-field polarized MIMO toolkit.
//!
//! Subcommands reproduce the standard analysis sweeps as CSV tables;
//! `validate` re-checks the structural invariants and reports the two
//! formula discrepancies settled by direct summation.
//!
//! Exit codes: 0 success, 2 config/usage error, 3 invariant failure.

mod config;
mod runners;
mod table;
mod validate;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CliError, CliOverrides, Settings};
use table::CsvTable;

#[derive(Parser)]
#[command(
    name = "nfmimo",
    version,
    about = "Near-field polarized MIMO experiment runner",
    after_help = "Parameters may also come from --config (key = value lines; \
                  flags win). Keys: D, M, delta_t, L, snr_db, rpol, tpol, lambda, eta, \
                  drop, jobs, reactive, out, sweep_var, sweep_min, sweep_max, sweep_count, \
                  allow_noncanonical, timestamp."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    overrides: CliOverrides,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and closed-form Gramian eigenvalues versus element spacing
    Eigenvalues,
    /// Optimized achievable rate versus SNR, exact and high-SNR approximation
    RateVsSnr,
    /// Optimal array size versus terminal distance
    OptimalSize,
    /// Rate along the axis for precoders designed at one position
    FocusSweep,
    /// High-SNR rate offset alpha versus normalized aperture
    AlphaCurve,
    /// Run the invariant suite and report formula resolutions
    Validate,
}

fn write_output(settings: &Settings, text: &str) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = Settings::load(&cli.overrides)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = settings.jobs {
        if jobs == 0 {
            return Err(config::usage("--jobs must be at least 1"));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool
        .build()
        .map_err(|e| config::usage(format!("cannot build worker pool: {e}")))?;

    let table: Option<CsvTable> = pool.install(|| match &cli.command {
        Command::Eigenvalues => runners::eigenvalue_sweep(&settings).map(Some),
        Command::RateVsSnr => runners::rate_vs_snr(&settings).map(Some),
        Command::OptimalSize => runners::optimal_size(&settings).map(Some),
        Command::FocusSweep => runners::focus_sweep_run(&settings).map(Some),
        Command::AlphaCurve => runners::alpha_curve(&settings).map(Some),
        Command::Validate => Ok(None),
    })?;

    match table {
        Some(table) => write_output(&settings, &table.render())?,
        None => {
            let checks = validate::run_all();
            let report = validate::report(&checks);
            write_output(&settings, &report)?;
            if checks.iter().any(|c| !c.passed) {
                return Err(CliError::Invariant("invariant checks failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err @ CliError::Usage(_)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err @ CliError::Invariant(_)) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
