//! File formats, output documents and subcommands of the `torwidth` tool.

mod commands;
pub mod doc;
pub mod error;
pub mod files;
pub mod svg;

pub use commands::{execute, run, Cli, Command};
pub use error::CliError;
