//! File formats, JSON configuration and command implementations for the
//! `spopo` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod report;

pub use config::RunConfig;
pub use error::CliError;
