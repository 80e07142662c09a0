//! File formats and the `segdoc` command line on top of `segdoc-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod image_io;
pub mod pnm;
pub mod schema;

pub use error::CliError;
