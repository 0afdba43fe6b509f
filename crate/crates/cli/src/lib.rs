//! Command-line harness around the `sparsehard` library: instance files,
//! experiment configuration and gap reports.
//!
//! Exit codes: 0 success, 1 validation error, 2 budget refusal, 3 failed checks.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod report;

pub use cli::Cli;
pub use commands::{run, Outcome};
pub use error::{exit, CliError, CliResult};
