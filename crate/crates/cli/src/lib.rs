//! Command-line front end, threading and file output for `heavymp-core`.

pub mod commands;
pub mod error;
pub mod experiment;
pub mod format;
pub mod parallel;
pub mod records;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
