//! Command-line driver for the C_λ-extended oscillator library.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for invalid
//! configuration, arguments outside a domain, or I/O errors.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;
pub mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::config::{parse_complex, Format, Overrides, RunConfig};
use crate::suites::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Environment variable holding the log filter, e.g. `CLOX_LOG=debug`.
pub const LOG_ENV: &str = "CLOX_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "clox",
    version,
    about = "Fock-space, coherent-state and Bargmann checks for the C_lambda-extended oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML file with lambda, alpha and optional run settings.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Suite for `verify` and `sweep`.
    #[arg(long, global = true, value_enum, default_value = "all")]
    pub suite: Suite,

    /// Single complex label, replacing the configured grid.
    #[arg(long, global = true, value_name = "RE,IM", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,

    #[arg(long, global = true)]
    pub mu: Option<usize>,

    #[arg(long = "alpha-cs", global = true)]
    pub alpha_cs: Option<usize>,

    #[arg(long, global = true)]
    pub kmax: Option<usize>,

    #[arg(long, global = true)]
    pub dim: Option<usize>,

    /// Output file, written atomically; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Energy levels E_n and their grades for n < dim.
    Spectrum,
    /// One coherent state |z;mu;alpha> with residual diagnostics.
    Cs,
    /// Radial density of the resolution-of-unity measure on the y grid.
    Density,
    /// Run verification suites and report every check.
    Verify,
    /// Run suites on seeded random admissible parameter sets.
    Sweep,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            z: self.z,
            mu: self.mu,
            alpha_cs: self.alpha_cs,
            kmax: self.kmax,
            dim: self.dim,
            out: self.out.clone(),
            format: self.format,
        }
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let Some(path) = &cli.config else {
        eprintln!("error: --config PATH is required");
        return EXIT_INVALID;
    };
    let cfg = match RunConfig::load(path, &cli.overrides()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    log::info!("lambda = {}, dim = {}, kmax = {}", cfg.lambda(), cfg.dim, cfg.kmax);

    let (text, code) = match cli.command {
        Command::Spectrum => (commands::spectrum_table(&cfg), EXIT_OK),
        Command::Cs => match commands::coherent_state(&cfg) {
            Ok(text) => (text, EXIT_OK),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
        },
        Command::Density => match commands::density(&cfg) {
            Ok((text, notes)) => {
                for n in notes {
                    eprintln!("note: {n}");
                }
                (text, EXIT_OK)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
        },
        Command::Verify => {
            let out = suites::run(&cfg, cli.suite);
            let r = report::Report::new(cfg.echo(), out.checks).with_observations(out.observations);
            report_outcome(r, cfg.format)
        }
        Command::Sweep => match commands::sweep(&cfg, cli.suite) {
            Ok(r) => report_outcome(r, cfg.format),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
        },
    };
    if let Err(e) = report::emit(&text, cfg.output.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    code
}

fn report_outcome(r: report::Report, format: Format) -> (String, i32) {
    for c in r.checks.iter().filter(|c| c.status == report::Status::Fail) {
        log::warn!("{} failed", c.name);
    }
    let code = if r.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    (r.render(format), code)
}
