//! Scenario files, region output and the `secrecy` subcommands.
//!
//! The binary is a thin wrapper over [`commands`]; every command is callable
//! from Rust and returns a [`CliError`] whose [`CliError::exit_code`] follows
//! the contract 0 ok, 1 verification failed, 2 validation, 3 numerical,
//! 4 I/O.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

pub use error::{CliError, Result};
pub use output::{Row, Source};
pub use scenario::{parse_scenario, serialize_scenario, ScenarioFile, Units};
