//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a computation fails or a check does
//! not pass, 2 for a bad command line or configuration.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand as ClapSubcommand};

pub use commands::{run_debye, run_decay, run_limits, run_polarization, run_screening, CommandError};
pub use config::{ConfigError, RunConfig, Subcommand};
pub use output::{format_number, render_csv, render_json, Check, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable capping worker threads (0 = automatic).
pub const THREADS_ENV: &str = "DEBYE_SCREEN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "debye-screen", version, about = "Thermal Debye screening calculator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// key=value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result table here.
    #[arg(long, global = true)]
    pub out_csv: Option<PathBuf>,
    /// Write the JSON document here and print one PASS/FAIL line per check.
    #[arg(long, global = true)]
    pub out_json: Option<PathBuf>,
    /// Seed for the Monte Carlo runs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Significant digits in the artifacts.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(6..=17))]
    pub precision: Option<u8>,
    /// Print nothing on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, ClapSubcommand)]
pub enum Command {
    /// Debye mass by every route.
    Debye,
    /// Radial potential of a static source.
    Screening,
    /// Polarization kernel scan.
    Polarization,
    /// Decay bounds of the two-point kernel and the convergence check.
    Decay,
    /// Zero-temperature and zero-mass limits.
    Limits,
}

impl Command {
    fn subcommand(self) -> Subcommand {
        match self {
            Command::Debye => Subcommand::Debye,
            Command::Screening => Subcommand::Screening,
            Command::Polarization => Subcommand::Polarization,
            Command::Decay => Subcommand::Decay,
            Command::Limits => Subcommand::Limits,
        }
    }
}

/// Configuration for a parsed command line, with flags applied over the
/// config file.
pub fn load_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let sub = cli.command.subcommand();
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: "--config".into(),
            message: format!("cannot read {}: {e}", path.display()),
        })?,
        None => String::new(),
    };
    let mut config = RunConfig::parse_for(sub, &text)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(p) = cli.precision {
        config.output.precision = p as usize;
    }
    if let Some(p) = &cli.out_csv {
        config.output.csv_path = Some(p.to_string_lossy().into_owned());
    }
    if let Some(p) = &cli.out_json {
        config.output.json_path = Some(p.to_string_lossy().into_owned());
    }
    Ok(config)
}

pub fn execute(config: &RunConfig) -> Result<Report, CommandError> {
    match config.subcommand {
        Subcommand::Debye => run_debye(config),
        Subcommand::Screening => run_screening(config),
        Subcommand::Polarization => run_polarization(config),
        Subcommand::Decay => run_decay(config),
        Subcommand::Limits => run_limits(config),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got '{raw}'"))?;
    // A pool may already exist when called twice in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs the program on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(m) = configure_threads() {
        eprintln!("error: {m}");
        return EXIT_CONFIG;
    }
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let report = match execute(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };

    let json = render_json(&report, &config);
    let csv = render_csv(&report, &config);
    if let Some(path) = &config.output.csv_path {
        if let Err(e) = std::fs::write(path, &csv) {
            eprintln!("error: cannot write {path}: {e}");
            return EXIT_FAILURE;
        }
    }
    match &config.output.json_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {path}: {e}");
                return EXIT_FAILURE;
            }
            if !cli.quiet {
                for c in &report.checks {
                    println!(
                        "{} {} value={} reference={}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        format_number(c.value, config.output.precision),
                        format_number(c.reference, config.output.precision),
                    );
                }
            }
        }
        None if !cli.quiet => print!("{json}"),
        None => {}
    }
    let failed = report.failed();
    if failed.is_empty() {
        EXIT_OK
    } else {
        for c in failed {
            eprintln!("check failed: {}", c.name);
        }
        EXIT_FAILURE
    }
}
