//! Sweep configuration: a flat `key = value` file plus command-line
//! overrides. Lists are comma-separated.
//!
//! ```text
//! # condition-number sweep
//! p = 200
//! n = 120
//! cond = 4,16,64,256,1024
//! eta = 0.25,0.4
//! estimators = oracle,rcf,lwls
//! trials = 200
//! seed = 1
//! out = fig1.csv
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::estimators::EstimatorKind;
use crate::evaluation::Scenario;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid value for '{key}': {message}")]
    Value { key: String, message: String },

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Largest admissible spectrum-shape fraction.
pub const MAX_ETA: f64 = 0.95;

/// Trials per grid point when none are given: 200 at `p >= 200`, else 1000.
pub fn default_trials(p: usize) -> usize {
    if p >= 200 {
        200
    } else {
        1000
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub p: usize,
    pub n_values: Vec<usize>,
    pub cond_values: Vec<f64>,
    pub eta_values: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub deterministic: bool,
}

/// Raw, unvalidated settings. Later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSettings {
    pub p: Option<usize>,
    pub n_values: Option<Vec<usize>>,
    pub cond_values: Option<Vec<f64>>,
    pub eta_values: Option<Vec<f64>>,
    pub estimators: Option<Vec<EstimatorKind>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub deterministic: Option<bool>,
}

impl SweepSettings {
    /// Parses the contents of a config file. `origin` labels error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut s = Self::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| ConfigError::Parse {
                path: origin.to_string(),
                line: k + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected 'key = value', got '{line}'")))?;
            s.set(key.trim(), value.trim())
                .map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "p" => self.p = Some(scalar(key, value)?),
            "n" => self.n_values = Some(list(key, value)?),
            "cond" => self.cond_values = Some(list(key, value)?),
            "eta" => self.eta_values = Some(list(key, value)?),
            "estimators" => self.estimators = Some(list(key, value)?),
            "trials" => self.trials = Some(scalar(key, value)?),
            "seed" => self.seed = Some(scalar(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "deterministic" => self.deterministic = Some(scalar(key, value)?),
            _ => {
                return Err(ConfigError::Value {
                    key: key.to_string(),
                    message: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    /// `other` wins wherever it is set.
    pub fn overlay(self, other: SweepSettings) -> Self {
        Self {
            p: other.p.or(self.p),
            n_values: other.n_values.or(self.n_values),
            cond_values: other.cond_values.or(self.cond_values),
            eta_values: other.eta_values.or(self.eta_values),
            estimators: other.estimators.or(self.estimators),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            out: other.out.or(self.out),
            deterministic: other.deterministic.or(self.deterministic),
        }
    }

    /// Fills defaults (the `n = 120`, condition-number sweep at `p = 200`)
    /// and validates.
    pub fn resolve(self) -> Result<SweepConfig, ConfigError> {
        let p = self.p.unwrap_or(200);
        let config = SweepConfig {
            p,
            n_values: self.n_values.unwrap_or_else(|| vec![120]),
            cond_values: self
                .cond_values
                .unwrap_or_else(|| vec![4.0, 16.0, 64.0, 256.0, 1024.0]),
            eta_values: self.eta_values.unwrap_or_else(|| vec![0.25, 0.4]),
            estimators: self.estimators.unwrap_or_else(|| {
                vec![
                    EstimatorKind::Oracle,
                    EstimatorKind::Rcf,
                    EstimatorKind::Lwls,
                ]
            }),
            trials: self.trials.unwrap_or_else(|| default_trials(p)),
            seed: self.seed.unwrap_or(1),
            out: self.out.unwrap_or_else(|| PathBuf::from("risk.csv")),
            deterministic: self.deterministic.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.n_values.is_empty() || self.cond_values.is_empty() || self.eta_values.is_empty() {
            return bad("n, cond and eta lists must be non-empty".into());
        }
        if self.estimators.is_empty() {
            return bad("at least one estimator is required".into());
        }
        if self.trials < 2 {
            return bad(format!("trials must be at least 2, got {}", self.trials));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2 || n >= self.p) {
            return bad(format!(
                "every n must satisfy 2 <= n < p = {}, got {n}",
                self.p
            ));
        }
        if let Some(c) = self
            .cond_values
            .iter()
            .find(|&&c| !(c >= 2.0) || !c.is_finite())
        {
            return bad(format!("condition numbers must be at least 2, got {c}"));
        }
        if let Some(e) = self
            .eta_values
            .iter()
            .find(|&&e| !(0.0..=MAX_ETA).contains(&e))
        {
            return bad(format!("eta must lie in [0, {MAX_ETA}], got {e}"));
        }
        for s in self.scenarios() {
            Scenario::new(s.p, s.n, s.target_cond, s.eta)
                .map_err(|e| ConfigError::Invalid(format!("{}: {e}", s.id())))?;
        }
        Ok(())
    }

    /// Grid points in output order: `n`, then condition number, then `eta`.
    pub fn scenarios(&self) -> Vec<Scenario> {
        let mut out = Vec::new();
        for &n in &self.n_values {
            for &target_cond in &self.cond_values {
                for &eta in &self.eta_values {
                    out.push(Scenario {
                        p: self.p,
                        n,
                        target_cond,
                        eta,
                    });
                }
            }
        }
        out
    }

    /// Number of CSV data rows the sweep produces.
    pub fn row_count(&self) -> usize {
        self.n_values.len() * self.cond_values.len() * self.eta_values.len() * self.estimators.len()
    }
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| ConfigError::Value {
            key: key.to_string(),
            message: format!("'{value}': {e}"),
        })
}

/// Parses a comma-separated list.
pub fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| scalar(key, s))
        .collect()
}
