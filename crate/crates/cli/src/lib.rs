//! File formats, JSON output and the `stablereg` command line.

pub mod commands;
pub mod error;
pub mod hgx;
pub mod json;
pub mod repro;

pub use commands::{run, Command, Context, Outcome};
pub use error::CliError;
