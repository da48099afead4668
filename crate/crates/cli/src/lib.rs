//! Command-line front end for `microrisk`: CSV and JSON input, the
//! `compute`, `enumerate` and `histogram` commands, and the report format.

pub mod commands;
pub mod config_file;
mod error;
pub mod input;
pub mod report_json;

pub use commands::{cmd_compute, cmd_enumerate, cmd_histogram, run, Cli, Command};
pub use error::CliError;
