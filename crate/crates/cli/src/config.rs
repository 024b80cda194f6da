//! Run configuration: built-in defaults, then an optional `key=value` file,
//! then command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use entropic_core::FixMode;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fp,
    Boltzmann,
    Convergence,
    Theory,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fp => "fp",
            Experiment::Boltzmann => "boltzmann",
            Experiment::Convergence => "convergence",
            Experiment::Theory => "theory",
        }
    }
}

/// Which trajectories to run: both (the default), or only one variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixSelection {
    Both,
    On,
    Off,
}

impl FixSelection {
    pub fn variants(self) -> &'static [bool] {
        match self {
            FixSelection::Both => &[false, true],
            FixSelection::On => &[true],
            FixSelection::Off => &[false],
        }
    }
}

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Fokker-Planck grid size.
    pub n: usize,
    /// Boltzmann lattice size per axis.
    pub m_lattice: usize,
    pub dt: f64,
    pub t_end: f64,
    pub fix: FixSelection,
    pub fix_mode: FixMode,
    pub seed: u64,
    pub out: PathBuf,
    /// Single theory check to run instead of the full suite.
    pub check: Option<String>,
}

impl RunConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let (dt, t_end) = match experiment {
            Experiment::Fp => (1.0 / 512.0, 0.1),
            Experiment::Boltzmann => (0.0007, 0.07),
            // A multiple of every step in the study.
            Experiment::Convergence => (1.0 / 1024.0, 13.0 / 128.0),
            Experiment::Theory => (0.0, 0.0),
        };
        Self {
            experiment,
            n: 64,
            m_lattice: 9,
            dt,
            t_end,
            fix: FixSelection::Both,
            fix_mode: FixMode::RootSolve,
            seed: DEFAULT_SEED,
            out: PathBuf::from("out"),
            check: None,
        }
    }

    /// Number of steps of size `dt` needed to reach `t_end`.
    pub fn n_steps(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    /// Applies `key=value` settings; unknown keys are usage errors.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "n" => self.n = parse_count(&key, value)?,
            "m_lattice" => self.m_lattice = parse_count(&key, value)?,
            "dt" => self.dt = parse_real(&key, value)?,
            "t_end" => self.t_end = parse_real(&key, value)?,
            "fix" => self.fix = parse_fix(value)?,
            "fix_mode" => self.fix_mode = parse_fix_mode(value)?,
            "seed" => {
                self.seed = value.parse().map_err(|_| {
                    CliError::Usage(format!("seed: '{value}' is not an unsigned integer"))
                })?
            }
            "out" => self.out = PathBuf::from(value),
            "check" => self.check = Some(value.to_owned()),
            other => return Err(CliError::Usage(format!("unknown setting '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} must be positive, got {v}")))
            }
        };
        match self.experiment {
            Experiment::Fp | Experiment::Boltzmann => {
                positive("dt", self.dt)?;
                positive("t_end", self.t_end)?;
            }
            Experiment::Convergence => positive("t_end", self.t_end)?,
            Experiment::Theory => {}
        }
        if self.experiment == Experiment::Boltzmann
            && (self.m_lattice < 3 || self.m_lattice % 2 == 0)
        {
            return Err(CliError::Usage(format!(
                "m_lattice must be odd and at least 3, got {}",
                self.m_lattice
            )));
        }
        if matches!(self.experiment, Experiment::Fp | Experiment::Convergence) && self.n < 4 {
            return Err(CliError::Usage(format!(
                "n must be at least 4, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected key=value, got '{line}'",
                lineno + 1
            ))
        })?;
        out.insert(k.trim().to_owned(), v.trim().to_owned());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Accepts decimals and fractions such as `1/512`.
pub fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("{key}: '{value}' is not a number"));
    let parsed = match value.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => value.parse().map_err(|_| bad())?,
    };
    if parsed.is_finite() {
        Ok(parsed)
    } else {
        Err(bad())
    }
}

fn parse_count(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("{key}: '{value}' is not a positive integer")))
}

pub fn parse_fix(value: &str) -> Result<FixSelection, CliError> {
    match value {
        "on" => Ok(FixSelection::On),
        "off" => Ok(FixSelection::Off),
        "both" => Ok(FixSelection::Both),
        other => Err(CliError::Usage(format!(
            "fix: expected on|off, got '{other}'"
        ))),
    }
}

pub fn parse_fix_mode(value: &str) -> Result<FixMode, CliError> {
    match value {
        "root" => Ok(FixMode::RootSolve),
        "cheap" => Ok(FixMode::CheapBound),
        other => Err(CliError::Usage(format!(
            "fix_mode: expected root|cheap, got '{other}'"
        ))),
    }
}
