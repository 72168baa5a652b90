//! Command-line front end for `dualpricer`.
//!
//! Each subcommand is turned into a flat [`config::ExperimentConfig`], merged
//! over an optional experiment file, and rendered as an aligned text table or
//! CSV.

pub mod args;
pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::ExperimentConfig;
pub use error::CliError;
