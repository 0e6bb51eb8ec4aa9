//! File formats and the command-line front end for `streamcalc`.

pub mod commands;
mod error;
pub mod formats;

pub use commands::{run, Outcome};
pub use error::{CliError, Result};
