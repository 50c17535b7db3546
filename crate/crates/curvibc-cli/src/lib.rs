//! Command-line front end for the curvilinear boundary-condition library.
//!
//! - [`commands`]: argument parsing, the `verify`, `analyze`, `simulate`
//!   and `report` subcommands and the exit-code contract.
//! - [`suites`]: the invariant suites run by `verify`.
//! - [`analyze`]: pointwise analysis.
//! - [`oracle`]: independent numeric references (companion-matrix roots,
//!   LU determinants).
//! - [`report`]: check and report types.
//! - [`error`]: CLI errors and exit codes.

pub mod analyze;
pub mod commands;
pub mod error;
pub mod oracle;
pub mod report;
pub mod suites;

pub use commands::{execute, run, Cli};
pub use error::{CliError, CliResult};
