//! Command-line front end: alist I/O, run records and experiment runners.

pub mod alist;
pub mod args;
pub mod commands;
pub mod error;
pub mod record;

pub use args::Cli;
pub use commands::{execute, run, Output};
pub use error::CliError;
pub use record::RunRecord;
