//! File-driven scenario runner for `qutrit-core`.
//!
//! [`parse_config`] turns a TOML scenario into a [`ScenarioConfig`],
//! [`render`] produces the output document and [`run_scenario`] writes it.

// `!(x <= tol)` is used on purpose so that NaN fails tolerance checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod scenario;

pub use config::{parse_config, ConfigError, Scenario, ScenarioConfig};
pub use scenario::{render, run_scenario, simulate_channel, Channel, RunError};

/// Process exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// The config could not be read or failed validation.
pub const EXIT_CONFIG: u8 = 1;
/// The run failed a numerical check or could not write its output.
pub const EXIT_RUN: u8 = 2;
