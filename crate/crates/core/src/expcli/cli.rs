//! Command-line front end of the `gridkrig` binary.
//!
//! ```text
//! gridkrig run --config exp.cfg [--out DIR] [--seed N] [--replicates N]
//! gridkrig theory --family exponential --theta 1 --theta-prime 10 --h 0.01 [--profile consistent]
//! gridkrig presets
//! ```
//!
//! Exit codes: 0 on success, 1 for usage, config and validation errors,
//! 2 for numerical or I/O failures.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{emit_results, run_preset, ExperimentConfig, Preset};
use crate::error::{Error, Result};
use crate::spectral::{CovarianceModel, Family, GridDesign, Profile};
use crate::theory::{misspec_error, QuadratureSpec};

#[derive(Debug, Parser)]
#[command(
    name = "gridkrig",
    version,
    about = "Grid-design kriging error: theory and Monte Carlo experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment config and write results, curves and a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Print the theoretical error of one cell on the infinite grid.
    Theory {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        theta: f64,
        /// Used parameter; defaults to `theta`.
        #[arg(long)]
        theta_prime: Option<f64>,
        /// Used family; defaults to `family`.
        #[arg(long, value_parser = parse_family)]
        family_used: Option<Family>,
        #[arg(long)]
        h: f64,
        #[arg(long, value_parser = parse_profile, default_value = "consistent")]
        profile: Profile,
    },
    /// List the available presets.
    Presets,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Cell { source, .. } | Error::Replicate { source, .. } => exit_code(source),
        e if e.is_validation() => 1,
        Error::UnknownFamily(_) | Error::UnknownProfile(_) | Error::NonPositiveTheta(_) => 1,
        _ => 2,
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    let write_err = |e: std::io::Error| Error::io("<stdout>", e);
    match command {
        Command::Run {
            config,
            out: dir,
            seed,
            replicates,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(replicates) = replicates {
                cfg.replicates = replicates;
            }
            if let Some(dir) = dir {
                cfg.output_dir = dir;
            }
            cfg.validate()?;
            let set = run_preset(&cfg)?;
            let files = emit_results(&set, &cfg.output_dir)?;
            writeln!(
                out,
                "{} rows, {} files in {}",
                set.rows.len(),
                files.len(),
                cfg.output_dir.display()
            )
            .map_err(write_err)?;
        }
        Command::Theory {
            family,
            theta,
            theta_prime,
            family_used,
            h,
            profile,
        } => {
            let truth = CovarianceModel::new(family, theta, profile)?;
            let used = CovarianceModel::new(family_used.unwrap_or(family), theta_prime.unwrap_or(theta), profile)?;
            let design = GridDesign::infinite(&[h])?;
            let value = misspec_error(&truth, &used, &design, &QuadratureSpec::default())?;
            writeln!(out, "{value}").map_err(write_err)?;
        }
        Command::Presets => {
            for p in Preset::ALL {
                writeln!(out, "{:<16} {}", p.name(), p.description()).map_err(write_err)?;
            }
        }
    }
    Ok(())
}

/// Run the CLI on `args` (program name first) and return the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
