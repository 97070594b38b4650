//! Scenario runner for the `accretia-core` pipelines.
//!
//! A scenario is a TOML file naming an operator, an α-grid and an optional
//! time grid. [`runner::run_scenario`] evaluates every α, writes CSV, JSON
//! and SVG reports, and maps the checks onto an exit code. [`acceptance`]
//! holds the built-in suite behind `accretia check`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod config;
pub mod format;
pub mod runner;
pub mod scenario;
pub mod svg;

pub use config::{parse_config, ConfigError, OperatorSpec, OutputKind, ScenarioConfig, Tolerances};
pub use runner::{run_scenario, CheckResult, RunError, RunSummary};
