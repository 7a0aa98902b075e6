//! Run and sweep configuration.
//!
//! Settings come from an optional flat `key = value` file (one key per line,
//! `#` starts a comment) and are then overridden by command-line flags. Each
//! flag has a file key of the same name.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::CliError;
use crate::cycle::{CycleSpec, Mode, DEFAULT_SAMPLES_PER_STROKE};
use crate::spectrum::EngineParams;

pub const RUN_KEYS: &[&str] = &["hbar", "mass", "v0", "l1", "l3", "mode", "samples", "out", "format"];
pub const SWEEP_KEYS: &[&str] = &["param", "start", "stop", "steps"];

/// Raw key/value settings, before typing.
pub type Settings = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(format!("unknown format '{other}' (expected csv, json or svg)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub hbar: f64,
    pub mass: f64,
    pub v0: f64,
    pub l1: f64,
    pub l3: f64,
    pub mode: Mode,
    pub samples: usize,
    pub output_path: Option<PathBuf>,
    /// `None` means the command's default format.
    pub output_format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    V0,
    L1,
    L3,
}

impl SweptParameter {
    pub fn key(self) -> &'static str {
        match self {
            SweptParameter::V0 => "v0",
            SweptParameter::L1 => "l1",
            SweptParameter::L3 => "l3",
        }
    }
}

impl FromStr for SweptParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "v0" => Ok(SweptParameter::V0),
            "l1" => Ok(SweptParameter::L1),
            "l3" => Ok(SweptParameter::L3),
            other => Err(format!("unknown sweep parameter '{other}' (expected v0, l1 or l3)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub parameter: SweptParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// Parses flat `key = value` text. Unknown keys (outside `allowed`) and
/// repeated keys are rejected.
pub fn parse_settings(text: &str, allowed: &[&str]) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {lineno}: expected 'key = value'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !allowed.contains(&key) {
            return Err(CliError::Config(format!("line {lineno}: unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(CliError::Config(format!("line {lineno}: key '{key}' has no value")));
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Config(format!("line {lineno}: key '{key}' given twice")));
        }
    }
    Ok(out)
}

fn parse_value<T: FromStr>(settings: &Settings, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    settings
        .get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| CliError::Config(format!("invalid value '{v}' for key '{key}': {e}")))
        })
        .transpose()
}

fn required<T: FromStr>(settings: &Settings, key: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    parse_value(settings, key)?
        .ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("key '{key}' must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_settings(settings: &Settings) -> Result<Self, CliError> {
        let num = |key: &str, default: f64| -> Result<f64, CliError> {
            finite(key, parse_value(settings, key)?.unwrap_or(default))
        };
        let mode = match settings.get("mode") {
            Some(m) => m.parse::<Mode>().map_err(|e| CliError::Config(e.to_string()))?,
            None => Mode::Paper,
        };
        Ok(Self {
            hbar: num("hbar", 1.0)?,
            mass: num("mass", 1.0)?,
            v0: num("v0", 0.0)?,
            l1: finite("l1", required(settings, "l1")?)?,
            l3: finite("l3", required(settings, "l3")?)?,
            mode,
            samples: parse_value(settings, "samples")?.unwrap_or(DEFAULT_SAMPLES_PER_STROKE),
            output_path: settings.get("out").map(PathBuf::from),
            output_format: parse_value(settings, "format")?,
        })
    }

    pub fn params(&self) -> Result<EngineParams, CliError> {
        EngineParams::new(self.hbar, self.mass, self.v0).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Validated cycle spec; parameter errors are config errors, geometry
    /// errors keep their own exit code.
    pub fn spec(&self) -> Result<CycleSpec, CliError> {
        if self.samples < 2 {
            return Err(CliError::Config(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        Ok(CycleSpec::new(self.params()?, self.l1, self.l3, self.mode, self.samples)?)
    }

    pub fn format_or(&self, default: OutputFormat, allowed: &[OutputFormat]) -> Result<OutputFormat, CliError> {
        let f = self.output_format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Config(format!("format '{f}' is not supported by this command")))
        }
    }

    /// Copy with the swept parameter set to `value`.
    pub fn with_parameter(&self, parameter: SweptParameter, value: f64) -> Self {
        let mut c = self.clone();
        match parameter {
            SweptParameter::V0 => c.v0 = value,
            SweptParameter::L1 => c.l1 = value,
            SweptParameter::L3 => c.l3 = value,
        }
        c
    }
}

impl SweepConfig {
    pub fn from_settings(settings: &Settings) -> Result<Self, CliError> {
        let parameter: SweptParameter = required(settings, "param")?;
        let start = finite("start", required(settings, "start")?)?;
        let stop = finite("stop", required(settings, "stop")?)?;
        let steps: usize = required(settings, "steps")?;
        if steps < 2 {
            return Err(CliError::Config(format!("steps must be at least 2, got {steps}")));
        }
        // The swept key need not be given for the base run.
        let mut base_settings = settings.clone();
        base_settings.entry(parameter.key().to_string()).or_insert_with(|| start.to_string());
        let base = RunConfig::from_settings(&base_settings)?;
        Ok(Self { base, parameter, start, stop, steps })
    }

    /// Grid values in sweep order; the last value is `stop` exactly.
    pub fn grid(&self) -> Vec<f64> {
        crate::numerics::linspace(self.start, self.stop, self.steps)
    }
}
