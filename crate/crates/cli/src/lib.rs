//! Command-line front end for `qigf-core`.
//!
//! Every subcommand is also callable as a library function returning a
//! [`Table`], which is how the acceptance suite drives it.

pub mod cli;
pub mod commands;
pub mod error;
pub mod figures;
pub mod grammar;
pub mod io;
pub mod prostate;

pub use cli::{execute, run, Cli, Command};
pub use error::{CliError, Result};
pub use io::{Cell, Format, Table};
