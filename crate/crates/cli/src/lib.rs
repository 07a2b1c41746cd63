//! Command-line front end for `bcurve-core`: operator parsing, the pipeline
//! subcommands and their JSON records.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod json;

pub use commands::Report;
pub use config::{Format, RunConfig};
pub use error::CliError;
