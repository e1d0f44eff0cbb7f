//! File formats, parallel drivers and the command-line front end for
//! `bestpath-core`.

pub mod cli;
pub mod dot;
pub mod error;
pub mod io;
pub mod num;
pub mod report;
pub mod runner;

pub use error::{CliError, Result};
