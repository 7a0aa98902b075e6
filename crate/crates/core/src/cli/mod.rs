//! Command-line front end.
//!
//! Exit codes: 0 success, 1 consistency check failed, 2 config error,
//! 3 geometry error, 4 I/O error, 5 numerical non-convergence.
//! The primary artifact goes to stdout unless `--out` is given; diagnostics
//! go to stderr.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::cycle::{consistency_report, run_cycle, sample_pl_diagram};
use crate::error::Error;
use config::{
    parse_settings, OutputFormat, RunConfig, Settings, SweepConfig, RUN_KEYS, SWEEP_KEYS,
};
use output::{cycle_csv, diagram_csv, diagram_svg, sweep_csv, to_json, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GEOMETRY: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Sim(#[from] Error),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
            CliError::Sim(e) => match e {
                Error::InvalidParams(_) | Error::Domain(_) => EXIT_CONFIG,
                Error::Geometry(_)
                | Error::IsothermOutOfRange { .. }
                | Error::DegenerateIsotherm { .. }
                | Error::UndefinedEfficiency { .. } => EXIT_GEOMETRY,
                Error::NonConvergence { .. }
                | Error::NonFiniteIntegrand { .. }
                | Error::Bracket { .. }
                | Error::InvalidTolerance(_) => EXIT_NUMERICAL,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ws-carnot", version, about = "Quantum Carnot cycle with a Woods-Saxon working substance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Work, heat input and efficiency of one cycle (JSON or CSV).
    Cycle(RunArgs),
    /// Pressure-width samples of the cycle (CSV, SVG or JSON).
    Diagram(RunArgs),
    /// Cycle quantities over a parameter grid (CSV or JSON).
    Sweep(SweepArgs),
    /// Audit of the published closed forms (JSON).
    Check(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat `key = value` config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub hbar: Option<String>,
    #[arg(long)]
    pub mass: Option<String>,
    /// Well depth.
    #[arg(long)]
    pub v0: Option<String>,
    /// Width at the start of the hot isotherm.
    #[arg(long)]
    pub l1: Option<String>,
    /// Width at the start of the cold isotherm.
    #[arg(long)]
    pub l3: Option<String>,
    /// `paper` or `exact`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Samples per stroke.
    #[arg(long)]
    pub samples: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// `csv`, `json` or `svg`.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Parameter to sweep: v0, l1 or l3.
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub stop: Option<String>,
    /// Number of grid points (at least 2).
    #[arg(long)]
    pub steps: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        [
            ("hbar", &self.hbar),
            ("mass", &self.mass),
            ("v0", &self.v0),
            ("l1", &self.l1),
            ("l3", &self.l3),
            ("mode", &self.mode),
            ("samples", &self.samples),
            ("out", &self.out),
            ("format", &self.format),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

impl SweepArgs {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        let mut o = self.run.overrides();
        o.extend(
            [("param", &self.param), ("start", &self.start), ("stop", &self.stop), ("steps", &self.steps)]
                .into_iter()
                .filter_map(|(k, v)| v.as_ref().map(|v| (k, v))),
        );
        o
    }
}

fn load_settings(
    path: Option<&Path>,
    allowed: &[&str],
    overrides: Vec<(&'static str, &String)>,
) -> Result<Settings, CliError> {
    let mut settings = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| {
                CliError::Config(format!("cannot read config file {}: {e}", p.display()))
            })?;
            parse_settings(&text, allowed)?
        }
        None => Settings::new(),
    };
    for (k, v) in overrides {
        settings.insert(k.to_string(), v.trim().to_string());
    }
    Ok(settings)
}

pub fn run_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    RunConfig::from_settings(&load_settings(args.config.as_deref(), RUN_KEYS, args.overrides())?)
}

pub fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let allowed: Vec<&str> = RUN_KEYS.iter().chain(SWEEP_KEYS).copied().collect();
    SweepConfig::from_settings(&load_settings(args.run.config.as_deref(), &allowed, args.overrides())?)
}

/// Serialized cycle result.
pub fn cmd_cycle(config: &RunConfig) -> Result<String, CliError> {
    let format = config.format_or(OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Csv])?;
    let result = run_cycle(&config.spec()?)?;
    Ok(match format {
        OutputFormat::Csv => cycle_csv(&result),
        _ => to_json(&result),
    })
}

/// Pressure-width samples as CSV, SVG or JSON.
pub fn cmd_diagram(config: &RunConfig) -> Result<String, CliError> {
    let format = config.format_or(
        OutputFormat::Csv,
        &[OutputFormat::Csv, OutputFormat::Svg, OutputFormat::Json],
    )?;
    let samples = sample_pl_diagram(&config.spec()?)?;
    Ok(match format {
        OutputFormat::Svg => diagram_svg(&samples),
        OutputFormat::Json => to_json(&samples),
        OutputFormat::Csv => diagram_csv(&samples),
    })
}

/// One row per grid point, in grid order. Every grid point is validated
/// before any cycle runs.
pub fn cmd_sweep(config: &SweepConfig) -> Result<String, CliError> {
    let format = config.base.format_or(OutputFormat::Csv, &[OutputFormat::Csv, OutputFormat::Json])?;
    let grid = config.grid();
    let mut specs = Vec::with_capacity(grid.len());
    let mut offending = Vec::new();
    for &value in &grid {
        match config.base.with_parameter(config.parameter, value).spec() {
            Ok(spec) => specs.push(spec),
            Err(e) => offending.push(format!("{}={} ({e})", config.parameter.key(), value)),
        }
    }
    if !offending.is_empty() {
        return Err(CliError::Sim(Error::Geometry(format!(
            "infeasible sweep grid points: {}",
            offending.join("; ")
        ))));
    }

    let rows = specs
        .par_iter()
        .zip(grid.par_iter())
        .map(|(spec, &value)| {
            run_cycle(spec).map(|r| SweepRow {
                value,
                work_total: r.work_total,
                heat_input: r.heat_input,
                efficiency: r.efficiency,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    Ok(match format {
        OutputFormat::Json => to_json(&rows),
        _ => sweep_csv(config.parameter, &rows),
    })
}

/// Consistency report as JSON, plus whether every zero-depth claim holds.
pub fn cmd_check(config: &RunConfig) -> Result<(String, bool), CliError> {
    config.format_or(OutputFormat::Json, &[OutputFormat::Json])?;
    let report = consistency_report(&config.spec()?);
    Ok((to_json(&report), report.zero_depth_claims_hold))
}

fn emit(artifact: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, artifact)
            .map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(artifact.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Cycle(args) => {
            let config = run_config(args)?;
            emit(&cmd_cycle(&config)?, config.output_path.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Diagram(args) => {
            let config = run_config(args)?;
            emit(&cmd_diagram(&config)?, config.output_path.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Sweep(args) => {
            let config = sweep_config(args)?;
            emit(&cmd_sweep(&config)?, config.base.output_path.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Check(args) => {
            let config = run_config(args)?;
            let (json, ok) = cmd_check(&config)?;
            emit(&json, config.output_path.as_deref())?;
            if !ok {
                eprintln!("ws-carnot: zero-depth consistency claims failed");
            }
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ws-carnot: {e}");
            e.exit_code()
        }
    }
}
