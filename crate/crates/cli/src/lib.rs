//! Library side of the `orbitzeta` command: algebra files, command dispatch,
//! the level-count cache and report rendering.

pub mod algebra_file;
pub mod cache;
pub mod commands;
pub mod report;

pub use algebra_file::{AlgebraFile, ParseError};
pub use commands::{run_command, CliError, Command, Options, CHECK_FAILED};
pub use report::{write_report, Format, RunReport};
