//! Std companion of `binomap-core`: file formats, pipeline configuration,
//! the synthetic scenario generator, plots and the `binomap` command line.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod plot;
pub mod scenario;

pub use error::{CliError, CliResult, Stage};
