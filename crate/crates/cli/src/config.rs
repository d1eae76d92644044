//! Settings resolution: flags > environment > config file > defaults.
//!
//! Flags and environment variables are merged by clap (each global flag has a
//! `TATE_*` variable). The config file fills whatever neither supplied.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::parse::parse_complex;

pub const DEFAULT_PRECISION: u32 = 20;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_PRIME_BOUND: u64 = 100_000;
pub const DEFAULT_ENUMERATION_BOUND: u64 = 10_000;

/// Contents of a `--config` TOML file. Unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub precision: Option<u32>,
    pub tolerance: Option<f64>,
    pub prime_bound: Option<u64>,
    pub enumeration_bound: Option<u64>,
    pub p: Option<u64>,
    pub s: Option<String>,
    pub json: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<ConfigFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Values supplied on the command line or through the environment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub tolerance: Option<f64>,
    pub prime_bound: Option<u64>,
    pub enumeration_bound: Option<u64>,
    pub p: Option<u64>,
    pub s: Option<String>,
    pub json: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub precision: u32,
    pub tolerance: f64,
    pub prime_bound: u64,
    pub enumeration_bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_complex")]
    pub s: Option<Complex64>,
    #[serde(skip)]
    pub json: bool,
}

fn ser_opt_complex<S: serde::Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    match z {
        Some(z) => [z.re, z.im].serialize(s),
        None => s.serialize_none(),
    }
}

impl Settings {
    pub fn resolve(over: &Overrides, file: &ConfigFile) -> Result<Settings, CliError> {
        let s = match over.s.as_ref().or(file.s.as_ref()) {
            Some(text) => Some(parse_complex(text)?),
            None => None,
        };
        let out = Settings {
            precision: over.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION),
            tolerance: over.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE),
            prime_bound: over.prime_bound.or(file.prime_bound).unwrap_or(DEFAULT_PRIME_BOUND),
            enumeration_bound: over
                .enumeration_bound
                .or(file.enumeration_bound)
                .unwrap_or(DEFAULT_ENUMERATION_BOUND),
            p: over.p.or(file.p),
            s,
            json: over.json.or(file.json).unwrap_or(false),
        };
        if out.precision == 0 {
            return Err(CliError::Usage("precision must be at least 1".into()));
        }
        if !(out.tolerance > 0.0) {
            return Err(CliError::Usage("tolerance must be positive".into()));
        }
        Ok(out)
    }

    pub fn require_p(&self) -> Result<u64, CliError> {
        self.p.ok_or_else(|| CliError::Usage("--p is required".into()))
    }

    pub fn require_s(&self) -> Result<Complex64, CliError> {
        self.s.ok_or_else(|| CliError::Usage("--s is required".into()))
    }
}
