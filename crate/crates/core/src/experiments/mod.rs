//! Experiment front end: sweep configuration, CSV output, grid execution
//! and the self-test.

pub mod config;
pub mod csv;
pub mod selftest;
pub mod sweep;

pub use config::{ConfigError, SweepConfig, SweepSettings};
pub use csv::{write_csv, CSV_HEADER};
pub use selftest::{cmd_selftest, SelftestReport};
pub use sweep::{cmd_sweep, run_sweep, SweepError};
