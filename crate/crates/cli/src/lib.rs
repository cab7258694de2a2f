//! Command-line front end for `so4lab`.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage, 3 numerical failure.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CliError, Outcome};
use config::{parse_half, RunConfig};
use output::Format;
use so4lab::HalfInteger;

fn half_arg(s: &str) -> Result<HalfInteger, String> {
    parse_half(s).ok_or_else(|| format!("'{s}' is not a multiple of 1/2"))
}

fn format_arg(s: &str) -> Result<Format, String> {
    s.parse()
}

/// Relativistic hydrogen spectra and SO(4) symmetry checks.
#[derive(Debug, Parser)]
#[command(name = "so4lab", version)]
pub struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format: json, csv, svg or text.
    #[arg(long, global = true, value_parser = format_arg)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Configuration override, applied after the file (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sommerfeld levels with binding energies and degeneracies.
    Spectrum {
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        /// Keep only this j (e.g. 3/2).
        #[arg(long, value_parser = half_arg)]
        j: Option<HalfInteger>,
    },
    /// Level depressions caused by a magnetic monopole of charge q.
    Depressions {
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long, value_parser = half_arg, default_value = "1/2")]
        q: HalfInteger,
    },
    /// Level diagram of the unperturbed and monopolar spectra as SVG.
    LevelsSvg {
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long, value_parser = half_arg, default_value = "1/2")]
        q: HalfInteger,
    },
    /// Closed-form radial functions f, g and the running norm.
    Radial {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = half_arg)]
        j: HalfInteger,
        /// Sign of the Dirac kappa (-1 or 1).
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        sign: i32,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Symmetry battery on the discretized sector.
    Verify {
        #[arg(long, value_parser = half_arg)]
        j: Option<HalfInteger>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        coarse_cells: Option<usize>,
        /// coulomb or nonabelian.
        #[arg(long)]
        potential: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        coupling: Option<f64>,
    },
    /// Symmetry breaking by the effective Lamb potential.
    Breaking {
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        no_delta: bool,
        #[arg(long)]
        no_spin_orbit: bool,
    },
}

fn usage(e: config::ConfigError) -> CliError {
    CliError::Usage(e.0)
}

fn set_opt<T: ToString>(cfg: &mut RunConfig, key: &str, v: Option<T>) -> Result<(), CliError> {
    match v {
        Some(v) => cfg.set(key, &v.to_string()).map_err(usage),
        None => Ok(()),
    }
}

/// Builds the configuration from file, overrides and flags, then runs the subcommand.
pub fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path).map_err(usage)?;
    }
    for kv in &cli.overrides {
        cfg.apply_override(kv).map_err(usage)?;
    }
    let chosen = cli.format.or(cfg.format);
    let pick = |default: Format| chosen.unwrap_or(default);
    let outcome = match &cli.command {
        Command::Spectrum { n_max, j } => commands::cmd_spectrum(*n_max, *j, &cfg, pick(Format::Text))?,
        Command::Depressions { n_max, q } => commands::cmd_depressions(*n_max, *q, &cfg, pick(Format::Text))?,
        Command::LevelsSvg { n_max, q } => commands::cmd_levels_svg(*n_max, *q, &cfg, pick(Format::Svg))?,
        Command::Radial { n, j, sign, samples } => {
            set_opt(&mut cfg, "radial_samples", *samples)?;
            commands::cmd_radial(*n, *j, *sign, &cfg, pick(Format::Csv))?
        }
        Command::Verify { j, n_max, cells, coarse_cells, potential, coupling } => {
            set_opt(&mut cfg, "verify_j", j.map(|j| format!("{}/2", j.twice())))?;
            set_opt(&mut cfg, "verify_n_max", *n_max)?;
            set_opt(&mut cfg, "cells", *cells)?;
            set_opt(&mut cfg, "coarse_cells", *coarse_cells)?;
            set_opt(&mut cfg, "potential", potential.as_deref())?;
            set_opt(&mut cfg, "coupling", *coupling)?;
            cfg.check().map_err(usage)?;
            commands::cmd_verify(&cfg, pick(Format::Text))?
        }
        Command::Breaking { mu, cells, no_delta, no_spin_orbit } => {
            set_opt(&mut cfg, "mu", *mu)?;
            set_opt(&mut cfg, "breaking_cells", *cells)?;
            if *no_delta {
                cfg.include_delta = false;
            }
            if *no_spin_orbit {
                cfg.include_spin_orbit = false;
            }
            commands::cmd_breaking(&cfg, pick(Format::Text))?
        }
    };
    let out = cli.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    Ok((outcome, out))
}

/// Parses `args`, runs, writes the output and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (outcome, out) = match execute(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("so4lab: error: {e}");
            return e.exit_code();
        }
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &outcome.body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(outcome.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("so4lab: error: {msg}");
        return 2;
    }
    if outcome.pass {
        0
    } else {
        eprintln!("so4lab: checks failed");
        1
    }
}
