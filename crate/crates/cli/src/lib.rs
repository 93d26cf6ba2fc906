//! Experiment runner for the time-fractional Cahn-Hilliard simulator:
//! JSON run configurations, seeded initial conditions, snapshot and series
//! files, and the `run`, `fit`, `check`, `bench` and `snapshot` subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod init;
pub mod io;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
