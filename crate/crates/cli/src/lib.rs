//! File formats, plots, parallel execution, and the command line for
//! [`allometry_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod manifest;
pub mod parallel;
pub mod svg;

pub use error::{CliError, Result, EXIT_BAD_INPUT, EXIT_NUMERIC};
