use std::fs::File;
use std::io::BufWriter;

use super::config::SweepConfig;
use super::csv::write_csv;
use crate::error::Result;
use crate::evaluation::{run_risk_many, RiskRecord};

/// Runs every grid point of `config` in order. `progress` sees each record
/// as soon as its grid point finishes.
pub fn run_sweep(
    config: &SweepConfig,
    mut progress: impl FnMut(&RiskRecord),
) -> Result<Vec<RiskRecord>> {
    let mut records = Vec::with_capacity(config.row_count());
    for scenario in config.scenarios() {
        let stream = scenario.stream(config.seed);
        for r in run_risk_many(&scenario, &config.estimators, config.trials, &stream)? {
            progress(&r);
            records.push(r);
        }
    }
    Ok(records)
}

/// Failure of a sweep after its configuration was accepted.
#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Numerical(#[from] crate::error::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Runs the sweep and writes its CSV to `config.out`.
pub fn cmd_sweep(
    config: &SweepConfig,
    progress: impl FnMut(&RiskRecord),
) -> std::result::Result<Vec<RiskRecord>, SweepError> {
    let records = run_sweep(config, progress)?;
    let write_err = |source| SweepError::Write {
        path: config.out.display().to_string(),
        source,
    };
    let file = File::create(&config.out).map_err(write_err)?;
    write_csv(BufWriter::new(file), &records, config.deterministic).map_err(write_err)?;
    Ok(records)
}
